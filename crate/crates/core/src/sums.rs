//! Exact sums `sum_a m(a) exp(L(a))` over (parts of) the alphabet.
//!
//! Listed blocks are summed directly; geometric levels and tail laws reduce
//! to products of the closed forms in [`crate::series`].

use crate::error::{Error, Result};
use crate::potential::{InducedPotential, PieceForm};
use crate::scheme::{Affine, InducingScheme, Piece, TailShape};
use crate::series::{exp_power_sum, SeriesValue};

/// Multiplier `m(a)` in the sum.
#[derive(Debug, Clone, Copy)]
pub enum Moment<'a> {
    One,
    Tau,
    /// Block sup of another potential.
    Potential(&'a InducedPotential),
}

pub fn total(
    scheme: &InducingScheme,
    pot: &InducedPotential,
    moment: Moment<'_>,
) -> Result<SeriesValue> {
    over_levels_from(scheme, pot, moment, 1)
}

/// Sum over the blocks with `tau(a) >= from`.
pub fn over_levels_from(
    scheme: &InducingScheme,
    pot: &InducedPotential,
    moment: Moment<'_>,
    from: u32,
) -> Result<SeriesValue> {
    sum_pieces(scheme, &scheme.pieces_from(from), pot, moment)
}

/// Sum over the single level `S_n`.
pub fn at_level(
    scheme: &InducingScheme,
    pot: &InducedPotential,
    moment: Moment<'_>,
    n: u32,
) -> Result<SeriesValue> {
    if n == 0 {
        return Err(Error::InvalidArgument("level index must be >= 1".into()));
    }
    let pieces = scheme.pieces_at(n);
    let pieces: Vec<Piece<'_>> = pieces
        .into_iter()
        .map(|p| match p {
            // a single level of the tail law behaves like a frozen family
            Piece::Tail { law, .. } => Piece::Tail { from: n, law },
            p => p,
        })
        .collect();
    let mut acc = SeriesValue::Finite(0.0);
    for p in &pieces {
        let v = match p {
            Piece::Tail { law, .. } => {
                let l = match pot.on_piece(scheme, p) {
                    Ok(PieceForm::Affine(a)) => a.at_level(n),
                    Ok(PieceForm::Scalar(_)) => unreachable!(),
                    Err(Error::Undetermined(_)) => return Ok(SeriesValue::Undetermined),
                    Err(e) => return Err(e),
                };
                let m = match moment_form(scheme, p, moment)? {
                    Some(PieceForm::Affine(a)) => a.at_level(n),
                    Some(PieceForm::Scalar(s)) => Affine::new(s, 0.0, 0.0),
                    None => return Ok(SeriesValue::Undetermined),
                };
                match law.shape {
                    TailShape::Single => SeriesValue::Finite(m.constant * l.constant.exp()),
                    TailShape::Geometric => geometric_family(l, m),
                }
            }
            p => piece_sum(scheme, p, pot, moment)?,
        };
        acc = acc + v;
    }
    Ok(acc)
}

fn sum_pieces(
    scheme: &InducingScheme,
    pieces: &[Piece<'_>],
    pot: &InducedPotential,
    moment: Moment<'_>,
) -> Result<SeriesValue> {
    let mut acc = SeriesValue::Finite(0.0);
    for p in pieces {
        acc = acc + piece_sum(scheme, p, pot, moment)?;
        if acc.is_divergent() {
            break;
        }
    }
    Ok(acc)
}

fn moment_form(
    scheme: &InducingScheme,
    piece: &Piece<'_>,
    moment: Moment<'_>,
) -> Result<Option<PieceForm>> {
    Ok(Some(match (moment, piece) {
        (Moment::One, Piece::Block(_)) => PieceForm::Scalar(1.0),
        (Moment::One, _) => PieceForm::Affine(Affine::new(1.0, 0.0, 0.0)),
        (Moment::Tau, Piece::Block(b)) => PieceForm::Scalar(b.tau() as f64),
        (Moment::Tau, Piece::Geometric { level, .. }) => {
            PieceForm::Affine(Affine::new(*level as f64, 0.0, 0.0))
        }
        (Moment::Tau, Piece::Tail { .. }) => PieceForm::Affine(Affine::new(0.0, 1.0, 0.0)),
        (Moment::Tau, Piece::Generated { .. }) => return Ok(None),
        (Moment::Potential(m), p) => match m.on_piece(scheme, p) {
            Ok(f) => f,
            Err(Error::Undetermined(_)) => return Ok(None),
            Err(e) => return Err(e),
        },
    }))
}

fn scaled(coef: f64, factor: Option<f64>) -> SeriesValue {
    if coef == 0.0 {
        SeriesValue::Finite(0.0)
    } else {
        factor.map_or(SeriesValue::Divergent, |f| SeriesValue::Finite(coef * f))
    }
}

fn product(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    Some(a? * b?)
}

/// `sum_{j>=1} (mc + mj j) e^{c + s j}`.
fn geometric_family(l: Affine, m: Affine) -> SeriesValue {
    let j0 = exp_power_sum(l.per_index, 0, 1);
    let j1 = exp_power_sum(l.per_index, 1, 1);
    let e = l.constant.exp();
    scaled(m.constant * e, j0) + scaled(m.per_index * e, j1)
}

fn piece_sum(
    scheme: &InducingScheme,
    piece: &Piece<'_>,
    pot: &InducedPotential,
    moment: Moment<'_>,
) -> Result<SeriesValue> {
    let l = match pot.on_piece(scheme, piece) {
        Ok(f) => f,
        Err(Error::Undetermined(_)) => return Ok(SeriesValue::Undetermined),
        Err(e) => return Err(e),
    };
    let Some(m) = moment_form(scheme, piece, moment)? else {
        return Ok(SeriesValue::Undetermined);
    };
    Ok(match (piece, l, m) {
        (Piece::Block(_), PieceForm::Scalar(l), PieceForm::Scalar(m)) => {
            SeriesValue::Finite(m * l.exp())
        }
        (Piece::Geometric { .. }, PieceForm::Affine(l), PieceForm::Affine(m)) => {
            geometric_family(l, m)
        }
        (Piece::Tail { from, law }, PieceForm::Affine(l), PieceForm::Affine(m)) => {
            let n0 = exp_power_sum(l.per_level, 0, *from as u64);
            let n1 = exp_power_sum(l.per_level, 1, *from as u64);
            let e = l.constant.exp();
            match law.shape {
                TailShape::Single => scaled(m.constant * e, n0) + scaled(m.per_level * e, n1),
                TailShape::Geometric => {
                    let j0 = exp_power_sum(l.per_index, 0, 1);
                    let j1 = exp_power_sum(l.per_index, 1, 1);
                    scaled(m.constant * e, product(n0, j0))
                        + scaled(m.per_level * e, product(n1, j0))
                        + scaled(m.per_index * e, product(n0, j1))
                }
            }
        }
        _ => return Err(Error::InvalidArgument("mismatched piece forms".into())),
    })
}
