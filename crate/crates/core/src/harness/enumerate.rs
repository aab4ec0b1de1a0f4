use itertools::Itertools;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::gauge::random_automorphism;
use super::CampaignConfig;
use crate::error::Result;
use crate::exactlin::Rational;
use crate::parabolic::{gauge_twist, line_sum_build, ParLineData, ParabolicBundle, Weight};
use crate::raynaud::Mode;

/// One enumerated bundle with its gauge-twisted copies.
#[derive(Clone, Debug)]
pub struct Instance {
    pub parts: Vec<ParLineData>,
    pub representative: ParabolicBundle,
    pub gauged: Vec<ParabolicBundle>,
}

/// Every parabolic line bundle with degree in `degrees` and weights in
/// (1/N)Z at the mode's points, ordered by degree (descending) then weights.
fn candidate_lines(mode: Mode, n: u32, degrees: impl Iterator<Item = i64> + Clone) -> Vec<ParLineData> {
    let weights: Vec<Weight> = (0..n as i64).map(|a| Weight::frac(a, n as i64)).collect();
    let mut out = Vec::new();
    let mut degs: Vec<i64> = degrees.collect();
    degs.sort_by(|a, b| b.cmp(a));
    for k in degs {
        match mode {
            Mode::SinglePoint => {
                for w in &weights {
                    out.push(ParLineData::new(k, [(crate::projline::PointOnLine::zero(), w.clone())]));
                }
            }
            Mode::TwoPoint => {
                for w0 in &weights {
                    for wi in &weights {
                        out.push(ParLineData::two_point(k, w0.clone(), wi.clone()));
                    }
                }
            }
        }
    }
    out
}

/// All multisets of `r` candidate lines with total parabolic degree `d`, each
/// listed in candidate order (so non-increasing degree).
pub fn enumerate_representatives(cfg: &CampaignConfig) -> Result<Vec<Vec<ParLineData>>> {
    cfg.request()?;
    let center = cfg.center_degree()?;
    let w = cfg.degree_window as i64;
    let lines = candidate_lines(cfg.mode, cfg.n, center - w..=center + w);
    let pardegs: Vec<Rational> = lines.iter().map(ParLineData::parabolic_degree).collect();
    Ok((0..lines.len())
        .combinations_with_replacement(cfg.r as usize)
        .filter(|idx| idx.iter().map(|&i| pardegs[i].clone()).sum::<Rational>() == cfg.d)
        .map(|idx| idx.into_iter().map(|i| lines[i].clone()).collect())
        .collect())
}

/// Seed for the gauge copies of the `index`-th representative.
pub(crate) fn instance_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

pub(crate) fn gauge_copies(rep: &ParabolicBundle, count: u32, seed: u64) -> Vec<ParabolicBundle> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let g = random_automorphism(rep.underlying(), &mut rng);
            gauge_twist(rep, &g).expect("random automorphisms are invertible")
        })
        .collect()
}

/// Representatives together with `gauge_samples` seeded gauge copies each.
pub fn enumerate_line_sums(cfg: &CampaignConfig) -> Result<Vec<Instance>> {
    enumerate_representatives(cfg)?
        .into_iter()
        .enumerate()
        .map(|(k, parts)| {
            let representative = line_sum_build(&parts)?;
            let gauged = gauge_copies(&representative, cfg.gauge_samples, instance_seed(cfg.seed, k));
            Ok(Instance {
                parts,
                representative,
                gauged,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projline::PointOnLine;

    fn w(a: i64, b: i64) -> Weight {
        Weight::frac(a, b)
    }

    #[test]
    fn rank_one_two_point_family() {
        let cfg = CampaignConfig::new(1, Rational::zero(), 2, Mode::TwoPoint)
            .unwrap()
            .with_window(1);
        let reps = enumerate_representatives(&cfg).unwrap();
        let mut got: Vec<ParLineData> = reps.into_iter().map(|mut v| v.remove(0)).collect();
        got.sort();
        let mut expect = vec![
            ParLineData::two_point(0, Weight::zero(), Weight::zero()),
            ParLineData::two_point(-1, w(1, 2), w(1, 2)),
        ];
        expect.sort();
        assert_eq!(got, expect);
    }

    #[test]
    fn single_point_family_contains_expected_members() {
        let cfg = CampaignConfig::new(2, Rational::one(), 2, Mode::SinglePoint).unwrap();
        let reps = enumerate_representatives(&cfg).unwrap();
        let zero = PointOnLine::zero();
        let a = vec![
            ParLineData::new(0, [(zero.clone(), w(1, 2))]),
            ParLineData::new(0, [(zero.clone(), w(1, 2))]),
        ];
        let b = vec![
            ParLineData::new(1, [(zero.clone(), w(1, 2))]),
            ParLineData::new(-1, [(zero.clone(), w(1, 2))]),
        ];
        assert!(reps.contains(&a));
        assert!(reps.contains(&b));
        for parts in &reps {
            assert_eq!(line_sum_build(parts).unwrap().parabolic_degree(), Rational::one());
        }
    }

    #[test]
    fn gauge_copies_are_reproducible() {
        let cfg = CampaignConfig::new(2, Rational::zero(), 3, Mode::TwoPoint)
            .unwrap()
            .with_window(1)
            .with_gauge_samples(3)
            .with_seed(11);
        let a = enumerate_line_sums(&cfg).unwrap();
        let b = enumerate_line_sums(&cfg).unwrap();
        assert!(!a.is_empty());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.gauged, y.gauged);
            assert_eq!(x.gauged.len(), 3);
            for g in &x.gauged {
                assert_eq!(g.parabolic_degree(), cfg.d);
            }
        }
    }

    #[test]
    fn tiny_window_can_be_empty() {
        // Rank 2, d = 1/2 with N = 2 in two-point mode: degree 0 parts have
        // pardeg in {0, 1/2, 1}, so window 0 still finds (0,0,0) + (0,1/2,0).
        let cfg = CampaignConfig::new(2, Rational::new(1, 2), 2, Mode::TwoPoint)
            .unwrap()
            .with_window(0);
        assert!(!enumerate_representatives(&cfg).unwrap().is_empty());
        let cfg = CampaignConfig::new(1, Rational::new(1, 2), 2, Mode::SinglePoint)
            .unwrap()
            .with_window(0);
        // floor(1/2) = 0, and O(0) with weight 1/2 is the only member.
        assert_eq!(enumerate_representatives(&cfg).unwrap().len(), 1);
    }
}
