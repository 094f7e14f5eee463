//! Large caps in F_3^5 and F_3^6 used by the verification mode of the cap search.
//!
//! The 112-cap consists of both nonzero vectors over each point of the
//! 56-point Hill cap in PG(5, 3). The 45-cap is the part of that 56-cap lying
//! off a hyperplane that meets it in 11 points, in affine coordinates.

pub(crate) const CAP_45: [[u8; 5]; 45] = [
    [0, 0, 0, 0, 0],
    [0, 0, 0, 0, 1],
    [0, 0, 0, 1, 0],
    [0, 0, 0, 2, 1],
    [0, 0, 1, 0, 1],
    [0, 0, 1, 1, 1],
    [0, 0, 1, 2, 2],
    [0, 1, 1, 0, 2],
    [0, 1, 1, 1, 0],
    [0, 1, 1, 2, 2],
    [0, 1, 2, 2, 2],
    [0, 2, 0, 0, 1],
    [0, 2, 0, 0, 2],
    [0, 2, 0, 2, 0],
    [0, 2, 0, 2, 1],
    [0, 2, 1, 0, 2],
    [0, 2, 1, 2, 1],
    [0, 2, 2, 1, 2],
    [1, 0, 0, 0, 0],
    [1, 0, 0, 0, 1],
    [1, 0, 0, 1, 2],
    [1, 0, 1, 0, 1],
    [1, 0, 2, 1, 2],
    [1, 0, 2, 2, 1],
    [1, 0, 2, 2, 2],
    [1, 1, 0, 2, 2],
    [1, 1, 1, 0, 0],
    [1, 1, 1, 2, 0],
    [1, 1, 1, 2, 2],
    [1, 1, 2, 0, 0],
    [1, 1, 2, 1, 0],
    [1, 1, 2, 1, 2],
    [1, 2, 0, 0, 0],
    [1, 2, 1, 0, 1],
    [1, 2, 2, 2, 0],
    [1, 2, 2, 2, 2],
    [2, 0, 2, 0, 0],
    [2, 1, 1, 0, 2],
    [2, 1, 2, 1, 0],
    [2, 1, 2, 2, 0],
    [2, 1, 2, 2, 1],
    [2, 2, 0, 0, 0],
    [2, 2, 0, 2, 1],
    [2, 2, 1, 0, 1],
    [2, 2, 2, 2, 1],
];

pub(crate) const CAP_112: [[u8; 6]; 112] = [
    [0, 0, 0, 1, 0, 2],
    [0, 0, 0, 2, 0, 1],
    [0, 0, 1, 0, 0, 1],
    [0, 0, 1, 0, 0, 2],
    [0, 0, 1, 0, 1, 0],
    [0, 0, 1, 0, 1, 2],
    [0, 0, 1, 1, 2, 1],
    [0, 0, 1, 2, 0, 1],
    [0, 0, 1, 2, 1, 2],
    [0, 0, 2, 0, 0, 1],
    [0, 0, 2, 0, 0, 2],
    [0, 0, 2, 0, 2, 0],
    [0, 0, 2, 0, 2, 1],
    [0, 0, 2, 1, 0, 2],
    [0, 0, 2, 1, 2, 1],
    [0, 0, 2, 2, 1, 2],
    [0, 1, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 1],
    [0, 1, 0, 0, 1, 2],
    [0, 1, 0, 1, 0, 1],
    [0, 1, 0, 2, 1, 2],
    [0, 1, 0, 2, 2, 1],
    [0, 1, 0, 2, 2, 2],
    [0, 1, 1, 0, 2, 0],
    [0, 1, 2, 1, 1, 0],
    [0, 1, 2, 1, 1, 2],
    [0, 1, 2, 1, 2, 0],
    [0, 1, 2, 2, 0, 1],
    [0, 2, 0, 0, 0, 0],
    [0, 2, 0, 0, 0, 2],
    [0, 2, 0, 0, 2, 1],
    [0, 2, 0, 1, 1, 1],
    [0, 2, 0, 1, 1, 2],
    [0, 2, 0, 1, 2, 1],
    [0, 2, 0, 2, 0, 2],
    [0, 2, 1, 1, 0, 2],
    [0, 2, 1, 2, 1, 0],
    [0, 2, 1, 2, 2, 0],
    [0, 2, 1, 2, 2, 1],
    [0, 2, 2, 0, 1, 0],
    [1, 0, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, 1],
    [1, 0, 0, 0, 1, 0],
    [1, 0, 0, 0, 2, 1],
    [1, 0, 0, 1, 0, 1],
    [1, 0, 0, 1, 1, 1],
    [1, 0, 0, 1, 2, 2],
    [1, 0, 1, 2, 2, 0],
    [1, 0, 2, 1, 1, 1],
    [1, 0, 2, 2, 0, 1],
    [1, 0, 2, 2, 1, 1],
    [1, 0, 2, 2, 2, 0],
    [1, 1, 0, 1, 0, 0],
    [1, 1, 1, 0, 2, 2],
    [1, 1, 1, 1, 0, 0],
    [1, 1, 1, 1, 2, 0],
    [1, 1, 1, 1, 2, 2],
    [1, 1, 1, 2, 0, 0],
    [1, 1, 1, 2, 1, 0],
    [1, 1, 1, 2, 1, 2],
    [1, 1, 2, 0, 1, 0],
    [1, 1, 2, 0, 1, 1],
    [1, 1, 2, 0, 2, 2],
    [1, 1, 2, 2, 0, 0],
    [1, 2, 0, 0, 1, 1],
    [1, 2, 0, 1, 2, 0],
    [1, 2, 0, 2, 1, 1],
    [1, 2, 0, 2, 2, 1],
    [1, 2, 1, 0, 0, 0],
    [1, 2, 1, 1, 1, 0],
    [1, 2, 1, 1, 1, 1],
    [1, 2, 1, 2, 0, 2],
    [1, 2, 2, 0, 0, 0],
    [1, 2, 2, 0, 2, 1],
    [1, 2, 2, 1, 0, 1],
    [1, 2, 2, 2, 2, 1],
    [2, 0, 0, 0, 0, 0],
    [2, 0, 0, 0, 0, 2],
    [2, 0, 0, 0, 1, 2],
    [2, 0, 0, 0, 2, 0],
    [2, 0, 0, 2, 0, 2],
    [2, 0, 0, 2, 1, 1],
    [2, 0, 0, 2, 2, 2],
    [2, 0, 1, 1, 0, 2],
    [2, 0, 1, 1, 1, 0],
    [2, 0, 1, 1, 2, 2],
    [2, 0, 1, 2, 2, 2],
    [2, 0, 2, 1, 1, 0],
    [2, 1, 0, 0, 2, 2],
    [2, 1, 0, 1, 1, 2],
    [2, 1, 0, 1, 2, 2],
    [2, 1, 0, 2, 1, 0],
    [2, 1, 1, 0, 0, 0],
    [2, 1, 1, 0, 1, 2],
    [2, 1, 1, 1, 1, 2],
    [2, 1, 1, 2, 0, 2],
    [2, 1, 2, 0, 0, 0],
    [2, 1, 2, 1, 0, 1],
    [2, 1, 2, 2, 2, 0],
    [2, 1, 2, 2, 2, 2],
    [2, 2, 0, 2, 0, 0],
    [2, 2, 1, 0, 1, 1],
    [2, 2, 1, 0, 2, 0],
    [2, 2, 1, 0, 2, 2],
    [2, 2, 1, 1, 0, 0],
    [2, 2, 2, 0, 1, 1],
    [2, 2, 2, 1, 0, 0],
    [2, 2, 2, 1, 2, 0],
    [2, 2, 2, 1, 2, 1],
    [2, 2, 2, 2, 0, 0],
    [2, 2, 2, 2, 1, 0],
    [2, 2, 2, 2, 1, 1],
];
