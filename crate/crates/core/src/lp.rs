//! Dense two-phase simplex over exact rationals.
//!
//! Instances here are tiny (tens of rows, at most a few thousand columns),
//! so a dense tableau with Bland's anti-cycling rule is plenty. Every answer
//! is exact, which lets callers treat feasibility as an equality check.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<BigRational>,
    pub relation: Relation,
    pub rhs: BigRational,
}

/// `minimize objective · x` subject to the constraints and `x ≥ 0`.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Vec<BigRational>,
    pub constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal {
        x: Vec<BigRational>,
        value: BigRational,
    },
    Infeasible,
    Unbounded,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            objective: vec![BigRational::zero(); num_vars],
            constraints: Vec::new(),
        }
    }

    pub fn add(&mut self, coeffs: Vec<BigRational>, relation: Relation, rhs: BigRational) {
        assert_eq!(coeffs.len(), self.num_vars);
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).run(&self.objective)
    }
}

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    rhs: Vec<BigRational>,
    basis: Vec<usize>,
    num_structural: usize,
    /// Columns at or beyond this index are artificial.
    first_artificial: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let n = lp.num_vars;
        let m = lp.constraints.len();
        // Normalise to nonnegative right-hand sides.
        let normalised: Vec<(Vec<BigRational>, Relation, BigRational)> = lp
            .constraints
            .iter()
            .map(|c| {
                if c.rhs.is_negative() {
                    let rel = match c.relation {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                    (c.coeffs.iter().map(|v| -v).collect(), rel, -&c.rhs)
                } else {
                    (c.coeffs.clone(), c.relation, c.rhs.clone())
                }
            })
            .collect();

        let slacks = normalised.iter().filter(|c| c.1 != Relation::Eq).count();
        let artificials = normalised.iter().filter(|c| c.1 != Relation::Le).count();
        let width = n + slacks + artificials;
        let first_artificial = n + slacks;

        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let (mut s, mut a) = (n, first_artificial);
        for (coeffs, rel, b) in normalised {
            let mut row = coeffs;
            row.resize(width, BigRational::zero());
            match rel {
                Relation::Le => {
                    row[s] = BigRational::one();
                    basis.push(s);
                    s += 1;
                }
                Relation::Ge => {
                    row[s] = -BigRational::one();
                    s += 1;
                    row[a] = BigRational::one();
                    basis.push(a);
                    a += 1;
                }
                Relation::Eq => {
                    row[a] = BigRational::one();
                    basis.push(a);
                    a += 1;
                }
            }
            rows.push(row);
            rhs.push(b);
        }
        Tableau {
            rows,
            rhs,
            basis,
            num_structural: n,
            first_artificial,
        }
    }

    fn width(&self) -> usize {
        self.rows.first().map_or(self.first_artificial, Vec::len)
    }

    fn run(mut self, objective: &[BigRational]) -> LpOutcome {
        let width = self.width();
        if width > self.first_artificial {
            let mut phase1 = vec![BigRational::zero(); width];
            for c in phase1.iter_mut().skip(self.first_artificial) {
                *c = BigRational::one();
            }
            // Phase one is bounded below by zero.
            let _ = self.optimise(&phase1, width);
            let infeasibility: BigRational = self
                .basis
                .iter()
                .zip(&self.rhs)
                .filter(|(&b, _)| b >= self.first_artificial)
                .map(|(_, v)| v.clone())
                .sum();
            if infeasibility.is_positive() {
                return LpOutcome::Infeasible;
            }
            self.drive_out_artificials();
        }

        let mut costs = vec![BigRational::zero(); self.first_artificial];
        costs[..self.num_structural].clone_from_slice(objective);
        if !self.optimise(&costs, self.first_artificial) {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![BigRational::zero(); self.num_structural];
        for (&b, v) in self.basis.iter().zip(&self.rhs) {
            if b < self.num_structural {
                x[b] = v.clone();
            }
        }
        let value = x.iter().zip(objective).map(|(a, b)| a * b).sum();
        LpOutcome::Optimal { x, value }
    }

    /// Minimises `costs · x` using columns `< limit`. Returns false when
    /// unbounded.
    fn optimise(&mut self, costs: &[BigRational], limit: usize) -> bool {
        loop {
            // Reduced costs d_j = c_j - c_B · column_j; Bland: first negative.
            let entering = (0..limit).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let mut d = costs[j].clone();
                for (i, row) in self.rows.iter().enumerate() {
                    let cb = &costs[self.basis[i]];
                    if !cb.is_zero() && !row[j].is_zero() {
                        d -= cb * &row[j];
                    }
                }
                d.is_negative()
            });
            let Some(col) = entering else {
                return true;
            };
            let mut leave: Option<(usize, BigRational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[col].is_positive() {
                    let ratio = &self.rhs[i] / &row[col];
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => {
                            ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((row, _)) = leave else {
                return false;
            };
            self.pivot(row, col);
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        if !p.is_one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v /= &p;
                }
            }
            self.rhs[r] /= &p;
        }
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        let nonzero: Vec<usize> = (0..prow.len()).filter(|&j| !prow[j].is_zero()).collect();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let factor = self.rows[i][c].clone();
            for &j in &nonzero {
                let delta = &factor * &prow[j];
                self.rows[i][j] -= delta;
            }
            self.rhs[i] -= &factor * &prhs;
        }
        self.basis[r] = c;
    }

    /// After a feasible phase one, any artificial still basic sits at zero;
    /// pivot it out or drop its (redundant) row.
    fn drive_out_artificials(&mut self) {
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] >= self.first_artificial {
                let col = (0..self.first_artificial).find(|&j| !self.rows[i][j].is_zero());
                match col {
                    Some(j) => {
                        self.pivot(i, j);
                        i += 1;
                    }
                    None => {
                        self.rows.remove(i);
                        self.rhs.remove(i);
                        self.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&n| r(n, 1)).collect()
    }

    #[test]
    fn textbook_maximisation() {
        // max 3x + 5y s.t. x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → (2, 6), value 36.
        let mut lp = LinearProgram::new(2);
        lp.objective = ints(&[-3, -5]);
        lp.add(ints(&[1, 0]), Relation::Le, r(4, 1));
        lp.add(ints(&[0, 2]), Relation::Le, r(12, 1));
        lp.add(ints(&[3, 2]), Relation::Le, r(18, 1));
        match lp.solve() {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(x, ints(&[2, 6]));
                assert_eq!(value, r(-36, 1));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn equality_and_ge_constraints() {
        // min x + y s.t. x + y = 1, x ≥ 1/3 → value 1 with x ≥ 1/3.
        let mut lp = LinearProgram::new(2);
        lp.objective = ints(&[1, 1]);
        lp.add(ints(&[1, 1]), Relation::Eq, r(1, 1));
        lp.add(ints(&[1, 0]), Relation::Ge, r(1, 3));
        match lp.solve() {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, r(1, 1));
                assert!(x[0] >= r(1, 3));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(1);
        lp.add(ints(&[1]), Relation::Le, r(1, 1));
        lp.add(ints(&[1]), Relation::Ge, r(2, 1));
        assert_eq!(lp.solve(), LpOutcome::Infeasible);

        let mut lp = LinearProgram::new(1);
        lp.objective = ints(&[-1]);
        lp.add(ints(&[1]), Relation::Ge, r(1, 1));
        assert_eq!(lp.solve(), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_equalities_are_dropped() {
        let mut lp = LinearProgram::new(2);
        lp.add(ints(&[1, 1]), Relation::Eq, r(1, 1));
        lp.add(ints(&[2, 2]), Relation::Eq, r(2, 1));
        assert!(matches!(lp.solve(), LpOutcome::Optimal { .. }));
    }

    #[test]
    fn negative_rhs_is_normalised() {
        // -x ≤ -1/2 means x ≥ 1/2; minimise x.
        let mut lp = LinearProgram::new(1);
        lp.objective = ints(&[1]);
        lp.add(ints(&[-1]), Relation::Le, r(-1, 2));
        match lp.solve() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, r(1, 2)),
            other => panic!("{other:?}"),
        }
    }
}
