//! Kulkarni-Nomizu product, curvature endomorphisms, the derivation action
//! `E·F` and the Tachibana tensor `Q(Z, F)`.

use thiserror::Error;

use crate::expr::RatFunc;
use crate::geometry::MetricSpec;
use crate::tensor::TensorField;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("{op}: expected a {expected} tensor, got rank {got}")]
    Valence {
        op: &'static str,
        expected: &'static str,
        got: usize,
    },
    #[error("{op}: operands live in different dimensions")]
    Dimension { op: &'static str },
}

fn require(
    op: &'static str,
    t: &TensorField,
    rank: usize,
    expected: &'static str,
) -> Result<(), AlgebraError> {
    if t.is_mixed() || t.rank() != rank {
        Err(AlgebraError::Valence {
            op,
            expected,
            got: t.total_rank(),
        })
    } else {
        Ok(())
    }
}

fn same_dim(op: &'static str, a: &TensorField, b: &TensorField) -> Result<(), AlgebraError> {
    if a.dim() == b.dim() {
        Ok(())
    } else {
        Err(AlgebraError::Dimension { op })
    }
}

fn prod(a: &RatFunc, b: &RatFunc) -> Option<RatFunc> {
    if a.is_zero() || b.is_zero() {
        None
    } else {
        Some(a * b)
    }
}

/// `(A∧E)(y1,y2,u1,u2) = A(y1,u2)E(y2,u1) - A(y1,u1)E(y2,u2)
///  + A(y2,u1)E(y1,u2) - A(y2,u2)E(y1,u1)`.
pub fn kulkarni_nomizu(a: &TensorField, e: &TensorField) -> Result<TensorField, AlgebraError> {
    require("kulkarni_nomizu", a, 2, "(0,2)")?;
    require("kulkarni_nomizu", e, 2, "(0,2)")?;
    same_dim("kulkarni_nomizu", a, e)?;
    let label = format!("({}∧{})", a.label(), e.label());
    Ok(TensorField::from_fn(a.dim(), 4, label, |i| {
        let (y1, y2, u1, u2) = (i[0], i[1], i[2], i[3]);
        let terms = [
            (prod(a.get(&[y1, u2]), e.get(&[y2, u1])), false),
            (prod(a.get(&[y1, u1]), e.get(&[y2, u2])), true),
            (prod(a.get(&[y2, u1]), e.get(&[y1, u2])), false),
            (prod(a.get(&[y2, u2]), e.get(&[y1, u1])), true),
        ];
        terms
            .into_iter()
            .fold(RatFunc::zero(), |acc, (t, neg)| match t {
                Some(t) if neg => &acc - &t,
                Some(t) => &acc + &t,
                None => acc,
            })
    }))
}

/// A (0,4) or (0,2) tensor viewed as an endomorphism by raising its last
/// slot: `(ℰ(U1,U2)Y)^α = g^{αd} E(U1,U2,Y,d)` and `(𝒵Y)^α = g^{αd} Z(Y,d)`.
/// Components are stored with the raised index first.
#[derive(Debug, Clone)]
pub struct EndomorphismField {
    mixed: TensorField,
}

impl EndomorphismField {
    pub fn raise(t: &TensorField, metric: &MetricSpec) -> Result<EndomorphismField, AlgebraError> {
        if t.is_mixed() || !(t.rank() == 2 || t.rank() == 4) {
            return Err(AlgebraError::Valence {
                op: "raise",
                expected: "(0,2) or (0,4)",
                got: t.total_rank(),
            });
        }
        let n = t.dim();
        let k = t.rank();
        let mixed = TensorField::mixed_from_fn(n, k - 1, format!("{}^", t.label()), |idx| {
            let alpha = idx[0];
            let mut full = idx[1..].to_vec();
            full.push(0);
            let mut acc = RatFunc::zero();
            for d in 0..n {
                let ginv = metric.inv(alpha, d);
                if ginv.is_zero() {
                    continue;
                }
                full[k - 1] = d;
                if let Some(p) = prod(ginv, t.get(&full)) {
                    acc = &acc + &p;
                }
            }
            acc
        });
        Ok(EndomorphismField { mixed })
    }

    /// Inverse of [`EndomorphismField::raise`].
    pub fn lower(&self, metric: &MetricSpec) -> TensorField {
        let n = self.mixed.dim();
        let k = self.mixed.rank() + 1;
        TensorField::from_fn(
            n,
            k,
            self.mixed.label().trim_end_matches('^').to_owned(),
            |idx| {
                let d = idx[k - 1];
                let mut m = vec![0];
                m.extend_from_slice(&idx[..k - 1]);
                let mut acc = RatFunc::zero();
                for alpha in 0..n {
                    m[0] = alpha;
                    if let Some(p) = prod(metric.g(d, alpha), self.mixed.get(&m)) {
                        acc = &acc + &p;
                    }
                }
                acc
            },
        )
    }

    pub fn mixed(&self) -> &TensorField {
        &self.mixed
    }

    /// `α` component of the image; `args` are the lower slots in order.
    pub fn apply(&self, alpha: usize, args: &[usize]) -> &RatFunc {
        let mut idx = Vec::with_capacity(args.len() + 1);
        idx.push(alpha);
        idx.extend_from_slice(args);
        self.mixed.get(&idx)
    }
}

/// `(E·F)(Y1..Yk,U1,U2) = -Σ_m F(Y1,..,ℰ(U1,U2)Y_m,..,Yk)`.
pub fn dot_action(
    e: &TensorField,
    f: &TensorField,
    metric: &MetricSpec,
) -> Result<TensorField, AlgebraError> {
    require("dot_action", e, 4, "(0,4)")?;
    if f.is_mixed() {
        return Err(AlgebraError::Valence {
            op: "dot_action",
            expected: "(0,k)",
            got: f.total_rank(),
        });
    }
    same_dim("dot_action", e, f)?;
    let endo = EndomorphismField::raise(e, metric)?;
    let n = f.dim();
    let k = f.rank();
    let label = format!("({}·{})", e.label(), f.label());
    Ok(TensorField::from_fn(n, k + 2, label, |idx| {
        let (ys, us) = idx.split_at(k);
        let mut acc = RatFunc::zero();
        let mut slot = ys.to_vec();
        for m in 0..k {
            for alpha in 0..n {
                let coeff = endo.apply(alpha, &[us[0], us[1], ys[m]]);
                if coeff.is_zero() {
                    continue;
                }
                slot[m] = alpha;
                if let Some(p) = prod(coeff, f.get(&slot)) {
                    acc = &acc - &p;
                }
            }
            slot[m] = ys[m];
        }
        acc
    }))
}

/// `Q(Z,F)(Y1..Yk,U1,U2) = Σ_m [Z(U1,Y_m) F(..U2 at m..) - Z(U2,Y_m) F(..U1 at m..)]`.
pub fn tachibana(z: &TensorField, f: &TensorField) -> Result<TensorField, AlgebraError> {
    require("tachibana", z, 2, "(0,2)")?;
    if f.is_mixed() {
        return Err(AlgebraError::Valence {
            op: "tachibana",
            expected: "(0,k)",
            got: f.total_rank(),
        });
    }
    same_dim("tachibana", z, f)?;
    let k = f.rank();
    let label = format!("Q({},{})", z.label(), f.label());
    Ok(TensorField::from_fn(f.dim(), k + 2, label, |idx| {
        let (ys, us) = idx.split_at(k);
        let (u1, u2) = (us[0], us[1]);
        let mut acc = RatFunc::zero();
        let mut slot = ys.to_vec();
        for m in 0..k {
            slot[m] = u2;
            if let Some(p) = prod(z.get(&[u1, ys[m]]), f.get(&slot)) {
                acc = &acc + &p;
            }
            slot[m] = u1;
            if let Some(p) = prod(z.get(&[u2, ys[m]]), f.get(&slot)) {
                acc = &acc - &p;
            }
            slot[m] = ys[m];
        }
        acc
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Chart;

    fn euclid(n: usize) -> MetricSpec {
        let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
        let chart = Chart::new(&names, &[]).unwrap();
        MetricSpec::from_matrix(chart, crate::linalg::identity(n)).unwrap()
    }

    #[test]
    fn kulkarni_nomizu_of_identity() {
        let g = euclid(2).as_tensor();
        let gg = kulkarni_nomizu(&g, &g).unwrap();
        assert_eq!(gg.get(&[0, 1, 0, 1]), &RatFunc::from_int(-2));
        assert_eq!(gg.get(&[0, 1, 1, 0]), &RatFunc::from_int(2));
    }

    #[test]
    fn tachibana_of_metric_with_itself_vanishes() {
        let g = euclid(3).as_tensor();
        assert!(tachibana(&g, &g).unwrap().is_zero());
    }

    #[test]
    fn raise_then_lower_is_identity() {
        let m = euclid(3);
        let t = TensorField::from_fn(3, 4, "T", |i| {
            RatFunc::from_int((i[0] + 2 * i[1] + 3 * i[2] + 5 * i[3]) as i64)
        });
        let e = EndomorphismField::raise(&t, &m).unwrap();
        assert_eq!(e.lower(&m), t);
    }

    #[test]
    fn valence_mismatch_is_reported() {
        let g = euclid(3).as_tensor();
        assert!(matches!(
            dot_action(&g, &g, &euclid(3)),
            Err(AlgebraError::Valence { .. })
        ));
        let t = TensorField::zeros(3, 3, "T");
        assert!(kulkarni_nomizu(&g, &t).is_err());
    }
}
