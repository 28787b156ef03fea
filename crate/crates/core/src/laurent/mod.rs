//! Modules over `R = ℤ[x, x⁻¹]`, their Ext groups, Cuntz–Krieger modules,
//! shift equivalence and isomorphism of obstruction pairs.

mod ck;
mod ext;
mod format;
mod module;
mod pair;
mod poly;
mod shift;

pub use ck::{ck_module, count_liftings, nekrashevych_module, validate_ck_matrix, CkModule};
pub use ext::{
    ext2_r, ext_r, ext_r_fg, ext_r_fg_limit, ext_r_pres, ext_r_via_resolution, randomize_module,
    ExtRFg, ExtRPres, ExtTriple, ExtValue, TotalComplex,
};
pub use format::{parse_module, write_module};
pub use module::{
    parity_split, suspend, GradedRModule, LimitGroup, LimitInvariants, LimitModule, Order,
    RModule, RModuleFg, RModulePres,
};
pub use pair::{cocycle_from_coords, pair_iso, PairDelta, PairVerdict};
pub use poly::{LaurentMatrix, LaurentPoly};
pub use shift::{
    charpoly_away_from_zero, distinguishing_invariants, lll_reduce, quotient_invariants,
    shift_equivalent, verify_shift_witness, Bounds, DistinguishingInvariant, ShiftVerdict,
};
