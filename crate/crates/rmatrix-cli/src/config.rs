use anyhow::{anyhow, bail, Context, Result};
use num_bigint::BigInt;
use rmatrix_core::lattice_theory::{identify_label, LatticeBasis, LatticeLabel};
use rmatrix_core::root_systems::{types_up_to_rank, Family, LieType, RootSystemData};
use std::str::FromStr;

/// Largest rank swept when `--rank` is omitted.
pub const DEFAULT_MAX_RANK: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Md,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeSelector {
    Root,
    Weight,
    /// Coefficient vectors in the fundamental-weight basis, adjoined to the root lattice.
    Subgroup(Vec<Vec<i64>>),
    All,
}

impl FromStr for LatticeSelector {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "root" => Ok(Self::Root),
            "weight" => Ok(Self::Weight),
            "all" => Ok(Self::All),
            _ => {
                let Some(spec) = s.strip_prefix("subgroup:") else {
                    bail!("unknown lattice selector `{s}`; expected root, weight, all or subgroup:<vec>");
                };
                let vectors = spec
                    .split(';')
                    .map(|v| {
                        v.split(',')
                            .map(|x| {
                                x.trim()
                                    .parse::<i64>()
                                    .with_context(|| format!("bad coefficient `{x}`"))
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                if vectors.iter().any(Vec::is_empty) {
                    bail!("empty generator in `{s}`");
                }
                Ok(Self::Subgroup(vectors))
            }
        }
    }
}

impl LatticeSelector {
    /// The label of the selected lattice for `rs`, or `None` for every lattice.
    pub fn resolve(&self, rs: &RootSystemData) -> Result<Option<LatticeLabel>> {
        match self {
            Self::All => Ok(None),
            Self::Root => Ok(Some(LatticeLabel::Root)),
            Self::Weight => Ok(Some(identify_label(rs, &LatticeBasis::weight(rs))?)),
            Self::Subgroup(vectors) => {
                let weights: Vec<Vec<BigInt>> = vectors
                    .iter()
                    .map(|v| v.iter().map(|&x| BigInt::from(x)).collect())
                    .collect();
                let l = LatticeBasis::from_weights(rs, &weights)
                    .map_err(|e| anyhow!("subgroup generators for {}: {e}", rs.lie_type))?;
                Ok(Some(l.label))
            }
        }
    }
}

/// Inclusive `A..B` (or `A..=B`); `B < A` gives an empty range.
pub fn parse_ell_range(s: &str) -> Result<Vec<u64>> {
    let (a, b) = s
        .split_once("..=")
        .or_else(|| s.split_once(".."))
        .ok_or_else(|| anyhow!("ℓ range `{s}` must look like A..B"))?;
    let a: u64 = a.trim().parse().with_context(|| format!("bad range start `{a}`"))?;
    let b: u64 = b.trim().parse().with_context(|| format!("bad range end `{b}`"))?;
    Ok((a..=b).collect())
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub types: Vec<LieType>,
    pub ells: Vec<u64>,
    pub lattice: LatticeSelector,
    pub format: Format,
    pub oracle: bool,
    pub max_group_order: u64,
    pub strict: bool,
}

impl RunConfig {
    pub fn types_for(family: Option<Family>, rank: Option<usize>) -> Result<Vec<LieType>> {
        match (family, rank) {
            (Some(f), Some(n)) => Ok(vec![LieType::new(f, n)?]),
            (Some(f), None) => Ok(types_up_to_rank(DEFAULT_MAX_RANK)
                .into_iter()
                .filter(|t| t.family == f)
                .collect()),
            (None, Some(_)) => bail!("--rank requires --family"),
            (None, None) => Ok(types_up_to_rank(DEFAULT_MAX_RANK)),
        }
    }

    pub fn ells_for(ell: Option<u64>, range: Option<&str>) -> Result<Vec<u64>> {
        let ells = match (ell, range) {
            (Some(l), None) => vec![l],
            (None, Some(r)) => parse_ell_range(r)?,
            (None, None) => bail!("one of --ell or --ell-range is required"),
            (Some(_), Some(_)) => bail!("--ell and --ell-range are mutually exclusive"),
        };
        if let Some(bad) = ells.iter().find(|&&l| l < 2) {
            bail!("ℓ must be at least 2, got {bad}");
        }
        Ok(ells)
    }

    /// Resolves the lattice selector for every type up front so that bad generators fail before any work.
    pub fn selections(&self, systems: &[RootSystemData]) -> Result<Vec<Option<LatticeLabel>>> {
        systems.iter().map(|rs| self.lattice.resolve(rs)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selectors_parse() {
        assert_eq!("root".parse::<LatticeSelector>().unwrap(), LatticeSelector::Root);
        assert_eq!(
            "subgroup:0,0,0,1".parse::<LatticeSelector>().unwrap(),
            LatticeSelector::Subgroup(vec![vec![0, 0, 0, 1]])
        );
        assert_eq!(
            "subgroup:1,0;0,2".parse::<LatticeSelector>().unwrap(),
            LatticeSelector::Subgroup(vec![vec![1, 0], vec![0, 2]])
        );
        assert!("lattice".parse::<LatticeSelector>().is_err());
        assert!("subgroup:1,x".parse::<LatticeSelector>().is_err());
    }

    #[test]
    fn ranges_are_inclusive() {
        assert_eq!(parse_ell_range("3..5").unwrap(), [3, 4, 5]);
        assert_eq!(parse_ell_range("3..=5").unwrap(), [3, 4, 5]);
        assert!(parse_ell_range("5..4").unwrap().is_empty());
        assert!(parse_ell_range("5").is_err());
        assert!(RunConfig::ells_for(Some(1), None).is_err());
    }

    #[test]
    fn type_selection() {
        assert_eq!(RunConfig::types_for(Some(Family::B), None).unwrap().len(), 3);
        assert!(RunConfig::types_for(Some(Family::E), Some(5)).is_err());
        assert!(RunConfig::types_for(None, Some(2)).is_err());
    }
}
