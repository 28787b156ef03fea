use num_traits::{One, Signed, Zero};

use crate::abelian::{is_isomorphism, kernel_cokernel, FgAbGroup, GroupMorphism};
use crate::error::{Error, Result};
use crate::laurent::poly::LaurentMatrix;
use crate::matrix::{Int, IntMatrix};
use crate::snf::{snf, LatticeSolver};

/// An R-module that is finitely generated over ℤ: a group with an
/// automorphism giving the action of `x`.
#[derive(Clone, Debug)]
pub struct RModuleFg {
    group: FgAbGroup,
    x: GroupMorphism,
    x_inv: GroupMorphism,
}

impl RModuleFg {
    /// Checks that `x` is a well-defined automorphism of `group`.
    pub fn new(group: FgAbGroup, x: IntMatrix) -> Result<Self> {
        let x = GroupMorphism::new(group.clone(), group.clone(), x)?;
        if !is_isomorphism(&x)? {
            return Err(Error::NotInvertible(format!(
                "x is not an automorphism of {}",
                group.describe()
            )));
        }
        let x_inv = invert(&x)?;
        Ok(RModuleFg { group, x, x_inv })
    }

    /// `group` with `x` acting as the identity.
    pub fn trivial_action(group: FgAbGroup) -> Self {
        let n = group.generators();
        Self::new(group, IntMatrix::identity(n)).expect("identity is an automorphism")
    }

    pub fn zero() -> Self {
        Self::trivial_action(FgAbGroup::trivial())
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    pub fn x(&self) -> &GroupMorphism {
        &self.x
    }

    pub fn x_inverse(&self) -> &GroupMorphism {
        &self.x_inv
    }

    pub fn is_zero(&self) -> bool {
        self.group.is_trivial()
    }

    pub fn direct_sum(parts: &[RModuleFg]) -> Result<Self> {
        let groups: Vec<FgAbGroup> = parts.iter().map(|p| p.group.clone()).collect();
        let blocks: Vec<IntMatrix> = parts.iter().map(|p| p.x.matrix().clone()).collect();
        Self::new(FgAbGroup::direct_sum(&groups), IntMatrix::block_diag(&blocks))
    }

    /// Whether `f` (between the underlying groups) commutes with `x`.
    pub fn is_r_linear(&self, target: &RModuleFg, f: &GroupMorphism) -> Result<bool> {
        let lhs = target.x.compose(f)?;
        let rhs = f.compose(&self.x)?;
        Ok(lhs.same_map(&rhs))
    }
}

impl PartialEq for RModuleFg {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.x.matrix() == other.x.matrix()
    }
}

/// Inverse of an automorphism, solving `x·y ≡ eⱼ` modulo the relations.
fn invert(x: &GroupMorphism) -> Result<GroupMorphism> {
    let g = x.source();
    let n = g.generators();
    let stacked = x.matrix().hstack(g.relations());
    let solver = LatticeSolver::new(&stacked);
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![Int::zero(); n];
        e[j] = Int::one();
        let sol = solver
            .solve(&e)
            .ok_or_else(|| Error::NotInvertible(format!("generator {j} is not in the image of x")))?;
        cols.push(sol[..n].to_vec());
    }
    GroupMorphism::new(g.clone(), g.clone(), IntMatrix::from_columns(n, &cols))
}

/// A module given by a Laurent presentation matrix: the cokernel of the
/// matrix acting on column vectors of `Rⁿ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RModulePres {
    matrix: LaurentMatrix,
}

impl RModulePres {
    pub fn new(matrix: LaurentMatrix) -> Self {
        RModulePres { matrix }
    }

    /// `coker(x·I − t)`.
    pub fn canonical(t: &IntMatrix) -> Self {
        RModulePres {
            matrix: LaurentMatrix::x_minus(t),
        }
    }

    pub fn matrix(&self) -> &LaurentMatrix {
        &self.matrix
    }

    /// `T` for the shape `x·I − T`, or an unsupported-shape error.
    pub fn canonical_t(&self) -> Result<IntMatrix> {
        self.matrix.canonical_shape().ok_or_else(|| {
            Error::UnsupportedShape("presentation is not of the form x*I - T".into())
        })
    }

    /// The underlying group `colim(ℤⁿ, T)` with `x` acting by `T`.
    pub fn as_limit(&self) -> Result<LimitModule> {
        let t = self.canonical_t()?;
        let g = FgAbGroup::free(t.rows());
        let x = GroupMorphism::new(g.clone(), g.clone(), t)?;
        Ok(LimitModule {
            group: g,
            x: x.clone(),
            shift: Some(x),
        })
    }

    /// The fg form `(ℤⁿ, T)` when `T` is invertible over ℤ.
    pub fn to_fg(&self) -> Result<Option<RModuleFg>> {
        let t = self.canonical_t()?;
        if !t.det().abs().is_one() {
            return Ok(None);
        }
        RModuleFg::new(FgAbGroup::free(t.rows()), t).map(Some)
    }
}

/// Either representation of an R-module.
#[derive(Clone, Debug, PartialEq)]
pub enum RModule {
    Fg(RModuleFg),
    Pres(RModulePres),
}

impl RModule {
    pub fn zero() -> Self {
        RModule::Fg(RModuleFg::zero())
    }

    pub fn as_fg(&self) -> Option<&RModuleFg> {
        match self {
            RModule::Fg(m) => Some(m),
            RModule::Pres(_) => None,
        }
    }

    /// The module as coefficients for Ext computations.
    pub fn as_limit(&self) -> Result<LimitModule> {
        match self {
            RModule::Fg(m) => Ok(LimitModule {
                group: m.group.clone(),
                x: m.x.clone(),
                shift: None,
            }),
            RModule::Pres(p) => p.as_limit(),
        }
    }

    /// The underlying abelian group, as a direct limit.
    pub fn underlying(&self) -> Result<LimitGroup> {
        let l = self.as_limit()?;
        Ok(match l.shift {
            Some(s) => LimitGroup::new(s),
            None => LimitGroup::new(GroupMorphism::identity(&l.group)),
        })
    }

    pub fn is_zero(&self) -> Result<bool> {
        Ok(self.underlying()?.is_trivial())
    }
}

/// A ℤ/2-graded R-module `M₊ ⊕ M₋`.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedRModule {
    pub even: RModule,
    pub odd: RModule,
}

impl GradedRModule {
    pub fn new(even: RModule, odd: RModule) -> Self {
        GradedRModule { even, odd }
    }

    pub fn even_only(even: RModule) -> Self {
        Self::new(even, RModule::zero())
    }

    pub fn part(&self, odd: bool) -> &RModule {
        if odd {
            &self.odd
        } else {
            &self.even
        }
    }
}

/// `M[1]`: the two parts swap.
pub fn suspend(m: &GradedRModule) -> GradedRModule {
    GradedRModule::new(m.odd.clone(), m.even.clone())
}

pub fn parity_split(m: &GradedRModule) -> (RModule, RModule) {
    (m.even.clone(), m.odd.clone())
}

/// Coefficients for Ext computations: a group `G` with an endomorphism
/// `x`, and optionally a shift `s` commuting with `x`; the module meant is
/// `colim(G, s)` (or `G` itself without a shift).
#[derive(Clone, Debug)]
pub struct LimitModule {
    pub group: FgAbGroup,
    pub x: GroupMorphism,
    pub shift: Option<GroupMorphism>,
}

/// The direct limit `colim(G →s G →s ⋯)` of a finitely generated group.
#[derive(Clone, Debug)]
pub struct LimitGroup {
    shift: GroupMorphism,
}

/// Cardinality of a possibly infinite group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Order {
    Finite(Int),
    Infinite,
}

impl Order {
    pub fn mul(&self, other: &Order) -> Order {
        match (self, other) {
            (Order::Finite(a), Order::Finite(b)) => Order::Finite(a * b),
            _ => Order::Infinite,
        }
    }
}

impl std::fmt::Display for Order {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => f.write_str("infinite"),
        }
    }
}

/// Isomorphism invariants of a direct limit: torsion subgroup, rank, and
/// for every prime `p` at which the torsion-free part is not of full
/// `p`-rank, the dimension of its reduction mod `p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LimitInvariants {
    pub torsion: Vec<Int>,
    pub rank: usize,
    pub p_ranks: Vec<(Int, usize)>,
}

impl LimitInvariants {
    pub fn is_trivial(&self) -> bool {
        self.torsion.is_empty() && self.rank == 0
    }

    pub fn order(&self) -> Order {
        if self.rank > 0 {
            Order::Infinite
        } else {
            Order::Finite(self.torsion.iter().product())
        }
    }

    /// Whether the limit is finitely generated (no prime is inverted).
    pub fn is_finitely_generated(&self) -> bool {
        self.p_ranks.is_empty()
    }

    pub fn describe(&self) -> String {
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{d}")).collect();
        if self.rank > 0 {
            let base = if self.p_ranks.is_empty() {
                "Z".to_string()
            } else {
                let primes: Vec<String> = self.p_ranks.iter().map(|(p, _)| p.to_string()).collect();
                format!("Z[1/{}]", primes.join(","))
            };
            if self.rank == 1 {
                parts.push(base);
            } else {
                let profile: Vec<String> = self
                    .p_ranks
                    .iter()
                    .map(|(p, r)| format!("{p}:{r}"))
                    .collect();
                if profile.is_empty() {
                    parts.push(format!("Z^{}", self.rank));
                } else {
                    parts.push(format!("rank {} [p-ranks {}]", self.rank, profile.join(" ")));
                }
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl LimitGroup {
    pub fn new(shift: GroupMorphism) -> Self {
        assert!(shift.source() == shift.target());
        LimitGroup { shift }
    }

    pub fn stage(&self) -> &FgAbGroup {
        self.shift.source()
    }

    pub fn shift(&self) -> &GroupMorphism {
        &self.shift
    }

    pub fn invariants(&self) -> LimitInvariants {
        let g = self.stage();
        let factors = g.invariant_factors();
        let s = self.shift.smith_matrix();
        let tor: Vec<usize> = (0..factors.len()).filter(|&i| !factors[i].is_zero()).collect();
        let free: Vec<usize> = (0..factors.len()).filter(|&i| factors[i].is_zero()).collect();

        // Torsion: eventual image of s on the finite torsion subgroup.
        let tgroup = FgAbGroup::cyclic_sum(&tor.iter().map(|&i| factors[i].clone()).collect::<Vec<_>>());
        let ts = s.select_rows(&tor).select_columns(&tor);
        let tmap = GroupMorphism::new(tgroup.clone(), tgroup.clone(), ts).expect("torsion is invariant");
        let order: Int = tgroup.order().expect("finite");
        let steps = order.bits() as usize + 1;
        let mut p = GroupMorphism::identity(&tgroup);
        for _ in 0..steps {
            p = tmap.compose(&p).expect("endomorphism");
        }
        let kc = kernel_cokernel(&p).expect("endomorphism");
        let image = crate::abelian::cohomology(Some(&kc.inclusion), &tgroup, None).expect("kernel inclusion");
        let torsion = image.group().torsion_factors();

        // Free part: rank and mod-p ranks of the eventual image of s̄.
        let r0 = free.len();
        let fs = s.select_rows(&free).select_columns(&free);
        let power = fs.pow(r0 as u32);
        let d = snf(&power);
        let diag: Vec<Int> = d.diagonal().into_iter().filter(|x| !x.is_zero()).collect();
        let rank = diag.len();
        let mut p_ranks = Vec::new();
        if let Some(last) = diag.last() {
            for prime in prime_factors(last) {
                let r = diag.iter().filter(|x| !(*x % &prime).is_zero()).count();
                p_ranks.push((prime, r));
            }
        }
        LimitInvariants {
            torsion,
            rank,
            p_ranks,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.invariants().is_trivial()
    }

    pub fn order(&self) -> Order {
        self.invariants().order()
    }
}

/// Prime factors by trial division, increasing.
pub(crate) fn prime_factors(n: &Int) -> Vec<Int> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = Int::from(2);
    while &p * &p <= n {
        if (&n % &p).is_zero() {
            out.push(p.clone());
            while (&n % &p).is_zero() {
                n /= &p;
            }
        }
        p += 1;
    }
    if n > Int::one() {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ints;

    #[test]
    fn fg_module_checks_invertibility() {
        let z = FgAbGroup::free(1);
        assert!(matches!(
            RModuleFg::new(z.clone(), IntMatrix::from_rows(&[[2]])),
            Err(Error::NotInvertible(_))
        ));
        let m = RModuleFg::new(z, IntMatrix::from_rows(&[[-1]])).unwrap();
        assert_eq!(m.x_inverse().matrix(), &IntMatrix::from_rows(&[[-1]]));
        // 2 is invertible on Z/3.
        let m = RModuleFg::new(FgAbGroup::cyclic(3), IntMatrix::from_rows(&[[2]])).unwrap();
        assert!(m
            .x()
            .compose(m.x_inverse())
            .unwrap()
            .same_map(&GroupMorphism::identity(m.group())));
    }

    #[test]
    fn limit_invariants() {
        // colim(Z, 3) = Z[1/3]
        let l = RModule::Pres(RModulePres::canonical(&IntMatrix::from_rows(&[[3]])))
            .underlying()
            .unwrap();
        let inv = l.invariants();
        assert_eq!(inv.rank, 1);
        assert_eq!(inv.p_ranks, vec![(Int::from(3), 0)]);
        assert_eq!(inv.describe(), "Z[1/3]");
        // Nilpotent shift: the limit vanishes.
        let g = FgAbGroup::free(2);
        let s = GroupMorphism::new(g.clone(), g, IntMatrix::from_rows(&[[0, 1], [0, 0]])).unwrap();
        assert!(LimitGroup::new(s).is_trivial());
        // Z/4 + Z/3 with shift 2: torsion part Z/3 survives.
        let g = FgAbGroup::cyclic_sum(&ints(&[4, 3]));
        let s = GroupMorphism::scalar(&g, 2);
        let inv = LimitGroup::new(s).invariants();
        assert_eq!(inv.torsion, ints(&[3]));
        assert_eq!(inv.order(), Order::Finite(Int::from(3)));
    }

    #[test]
    fn suspension_swaps_parts() {
        let m = GradedRModule::even_only(RModule::Fg(RModuleFg::trivial_action(FgAbGroup::cyclic(2))));
        let s = suspend(&m);
        assert!(s.even.is_zero().unwrap());
        assert!(!s.odd.is_zero().unwrap());
        assert_eq!(suspend(&s), m);
        assert_eq!(parity_split(&m), (m.even.clone(), m.odd.clone()));
    }

    #[test]
    fn primes() {
        assert_eq!(prime_factors(&Int::from(360)), ints(&[2, 3, 5]));
        assert!(prime_factors(&Int::from(1)).is_empty());
    }
}
