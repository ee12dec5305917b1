//! Shared fixtures for the criterion benchmarks.

use fracsep_core::cantor::{make_asymmetric, make_symmetric};
use fracsep_core::ifs::IFS1D;
use fracsep_core::scalar::Scalar;

pub fn middle_quarter() -> IFS1D {
    make_symmetric(&Scalar::ratio(1, 4)).expect("valid parameter")
}

pub fn middle_third() -> IFS1D {
    make_symmetric(&Scalar::ratio(1, 3)).expect("valid parameter")
}

pub fn golden_pair() -> IFS1D {
    make_asymmetric(&Scalar::ratio(1, 25), &Scalar::ratio(1, 5)).expect("valid parameters")
}
