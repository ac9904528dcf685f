//! Bundled groups, the JSON group-file format and the optional remote fetcher.
//!
//! Every record carries optional fingerprints (order, class count,
//! abelianization invariants, character degrees). Realizing a record checks
//! each fingerprint that is present and fails loudly on the first mismatch.

use std::collections::HashMap;
use std::hash::Hash;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use num_traits::One;

use crate::chartab::{character_table, frobenius_schur_indicator, CharacterTable};
use crate::cyclo::field_of_values;
use crate::error::{Error, Result};
use crate::groups::{GroupData, Permutation};

/// Recipes for groups given by an explicit multiplication law; they are
/// realized through the right regular action on their own elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Recipe {
    /// Cyclic group of order `n`, generated by an `n`-cycle.
    Cyclic { n: u32 },
    /// Dicyclic group of order `4n`: pairs `(a, d)` with `a` mod `2n`, `d` mod 2,
    /// `(a,0)(c,d) = (a+c, d)`, `(a,1)(c,0) = (a-c, 1)`, `(a,1)(c,1) = (a-c+n, 0)`.
    Dicyclic { n: u32 },
    /// `(Z_m x Z_m) x| C_k` where the generator of `C_k` acts by `matrix` (row-major).
    AbelianByCyclic {
        modulus: u32,
        matrix: [[i64; 2]; 2],
        cyclic_order: u32,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    Generators {
        degree: usize,
        generators: Vec<Permutation>,
    },
    Recipe(Recipe),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fingerprints {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub num_classes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abelianization: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degrees: Option<Vec<u64>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Annotations {
    /// Small-group identifier, stored as given and never verified.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
    /// Inert polynomial data (coefficients, constant term first) kept for reference only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polynomial: Option<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupRecord {
    pub name: String,
    pub construction: Construction,
    #[serde(default)]
    pub expected: Fingerprints,
    #[serde(default)]
    pub annotations: Annotations,
    pub provenance: String,
}

/// On-disk group file.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupFile {
    pub name: String,
    pub degree: usize,
    pub generators: Vec<Vec<u32>>,
    #[serde(default)]
    pub expected: Fingerprints,
    #[serde(default)]
    pub annotations: Annotations,
}

fn regular_action<T, F>(elements: &[T], generators: &[T], mul: F) -> Result<Vec<Permutation>>
where
    T: Clone + Eq + Hash,
    F: Fn(&T, &T) -> T,
{
    let index: HashMap<&T, usize> = elements.iter().enumerate().map(|(i, x)| (x, i)).collect();
    generators
        .iter()
        .map(|g| {
            let images: Vec<u32> = elements
                .iter()
                .map(|x| index[&mul(x, g)] as u32)
                .collect();
            Permutation::from_zero_based(images)
        })
        .collect()
}

fn mat_vec(m: &[[i64; 2]; 2], v: (i64, i64), modulus: i64) -> (i64, i64) {
    (
        (m[0][0] * v.0 + m[0][1] * v.1).rem_euclid(modulus),
        (m[1][0] * v.0 + m[1][1] * v.1).rem_euclid(modulus),
    )
}

impl Recipe {
    /// Degree and generators of the permutation realization.
    pub fn permutations(&self) -> Result<(usize, Vec<Permutation>)> {
        match *self {
            Recipe::Cyclic { n } => {
                let n = n.max(1);
                let cycle: Vec<u32> = (0..n).map(|i| (i + 1) % n).collect();
                let gens = if n == 1 {
                    vec![]
                } else {
                    vec![Permutation::from_zero_based(cycle)?]
                };
                Ok((n as usize, gens))
            }
            Recipe::Dicyclic { n } => {
                let m = 2 * n as i64;
                let half = n as i64;
                let elements: Vec<(i64, i64)> =
                    (0..2).flat_map(|d| (0..m).map(move |a| (a, d))).collect();
                let mul = |x: &(i64, i64), y: &(i64, i64)| match (x.1, y.1) {
                    (0, d) => ((x.0 + y.0).rem_euclid(m), d),
                    (_, 0) => ((x.0 - y.0).rem_euclid(m), 1),
                    _ => ((x.0 - y.0 + half).rem_euclid(m), 0),
                };
                let gens = regular_action(&elements, &[(1, 0), (0, 1)], mul)?;
                Ok((elements.len(), gens))
            }
            Recipe::AbelianByCyclic {
                modulus,
                matrix,
                cyclic_order,
            } => {
                let m = modulus as i64;
                let k = cyclic_order as usize;
                let mut powers = vec![[[1i64, 0], [0, 1]]];
                for i in 1..=k {
                    let prev = powers[i - 1];
                    let mut next = [[0i64; 2]; 2];
                    for (r, row) in next.iter_mut().enumerate() {
                        for (c, cell) in row.iter_mut().enumerate() {
                            *cell = (prev[r][0] * matrix[0][c] + prev[r][1] * matrix[1][c])
                                .rem_euclid(m);
                        }
                    }
                    powers.push(next);
                }
                if powers[k] != [[1, 0], [0, 1]] {
                    return Err(Error::InvalidRepSpec(format!(
                        "matrix {matrix:?} does not have order dividing {k} mod {m}"
                    )));
                }
                let elements: Vec<(i64, i64, usize)> = (0..k)
                    .flat_map(|i| (0..m).flat_map(move |a| (0..m).map(move |b| (a, b, i))))
                    .collect();
                let mul = |x: &(i64, i64, usize), y: &(i64, i64, usize)| {
                    let w = mat_vec(&powers[x.2], (y.0, y.1), m);
                    ((x.0 + w.0).rem_euclid(m), (x.1 + w.1).rem_euclid(m), (x.2 + y.2) % k)
                };
                let gens = regular_action(&elements, &[(1, 0, 0), (0, 1, 0), (0, 0, 1)], mul)?;
                Ok((elements.len(), gens))
            }
        }
    }
}

impl Fingerprints {
    /// Checks every present fingerprint against the realized group.
    pub fn check(&self, name: &str, group: &Arc<GroupData>) -> Result<Option<CharacterTable>> {
        let mismatch = |fp: &str, expected: String, found: String| Error::Fingerprint {
            group: name.to_string(),
            fingerprint: fp.to_string(),
            expected,
            found,
        };
        if let Some(order) = self.order {
            if group.order() != order {
                return Err(mismatch("order", order.to_string(), group.order().to_string()));
            }
        }
        if let Some(n) = self.num_classes {
            if group.num_classes() != n {
                return Err(mismatch(
                    "num_classes",
                    n.to_string(),
                    group.num_classes().to_string(),
                ));
            }
        }
        if let Some(ab) = &self.abelianization {
            let found = group.abelianization();
            if &found != ab {
                return Err(mismatch("abelianization", format!("{ab:?}"), format!("{found:?}")));
            }
        }
        if let Some(degrees) = &self.degrees {
            let table = character_table(group)?;
            let mut found = table.degrees().to_vec();
            let mut want = degrees.clone();
            found.sort_unstable();
            want.sort_unstable();
            if found != want {
                return Err(mismatch("degrees", format!("{want:?}"), format!("{found:?}")));
            }
            return Ok(Some(table));
        }
        Ok(None)
    }

    /// Fingerprints observed on a realized group.
    pub fn observe(group: &Arc<GroupData>, table: Option<&CharacterTable>) -> Self {
        let mut degrees = table.map(|t| t.degrees().to_vec());
        if let Some(d) = degrees.as_mut() {
            d.sort_unstable();
        }
        Self {
            order: Some(group.order()),
            num_classes: Some(group.num_classes()),
            abelianization: Some(group.abelianization()),
            degrees,
        }
    }
}

/// Realizes a record as a permutation group and verifies its fingerprints.
pub fn realize(record: &GroupRecord, bound: usize) -> Result<Arc<GroupData>> {
    realize_with_table(record, bound).map(|(g, _)| g)
}

/// Like [`realize`], also returning the character table when the degree
/// fingerprint forced its computation.
pub fn realize_with_table(
    record: &GroupRecord,
    bound: usize,
) -> Result<(Arc<GroupData>, Option<CharacterTable>)> {
    let (degree, generators) = match &record.construction {
        Construction::Generators { degree, generators } => (*degree, generators.clone()),
        Construction::Recipe(recipe) => recipe.permutations()?,
    };
    let group = Arc::new(GroupData::enumerate(
        record.name.clone(),
        degree,
        generators,
        bound,
    )?);
    let table = record.expected.check(&record.name, &group)?;
    Ok((group, table))
}

fn parse_error(err: &serde_json::Error) -> Error {
    Error::Parse {
        line: err.line(),
        column: err.column(),
        message: err.to_string(),
    }
}

/// Parses the JSON group-file format.
pub fn parse_group_file(text: &str) -> Result<GroupRecord> {
    let file: GroupFile = serde_json::from_str(text).map_err(|e| parse_error(&e))?;
    let mut generators = Vec::with_capacity(file.generators.len());
    for g in &file.generators {
        if g.len() != file.degree {
            return Err(Error::DegreeMismatch {
                expected: file.degree,
                found: g.len(),
            });
        }
        generators.push(Permutation::from_one_based(g)?);
    }
    Ok(GroupRecord {
        name: file.name,
        construction: Construction::Generators {
            degree: file.degree,
            generators,
        },
        expected: file.expected,
        annotations: file.annotations,
        provenance: "group file".into(),
    })
}

pub fn load_group_file(path: impl AsRef<Path>) -> Result<GroupRecord> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let mut record = parse_group_file(&text)?;
    record.provenance = format!("file:{}", path.display());
    Ok(record)
}

/// Serializes a record with explicit generators back into the group-file format.
pub fn to_group_file(record: &GroupRecord) -> Result<GroupFile> {
    let (degree, generators) = match &record.construction {
        Construction::Generators { degree, generators } => (*degree, generators.clone()),
        Construction::Recipe(r) => r.permutations()?,
    };
    Ok(GroupFile {
        name: record.name.clone(),
        degree,
        generators: generators.iter().map(Permutation::one_based).collect(),
        expected: record.expected.clone(),
        annotations: record.annotations.clone(),
    })
}

pub const BUILTIN_NAMES: &[&str] = &["trivial", "c2", "c3", "c4", "c2xc2", "s3", "dic3", "sg48_3"];

/// The degree-12 polynomial whose Galois closure has group of order 48, kept as inert data.
pub const SG48_3_FIELD_POLYNOMIAL: [i64; 13] = [25, 0, 500, 0, 595, 0, 50, 0, -82, 0, 2, 0, 1];

fn generators(degree: usize, gens: &[&[u32]]) -> Construction {
    Construction::Generators {
        degree,
        generators: gens
            .iter()
            .map(|g| Permutation::from_one_based(g).expect("bundled generator"))
            .collect(),
    }
}

/// Bundled group records.
pub fn builtin(name: &str) -> Result<GroupRecord> {
    let fp = |order: usize, classes: usize, ab: &[u64], degrees: &[u64]| Fingerprints {
        order: Some(order),
        num_classes: Some(classes),
        abelianization: Some(ab.to_vec()),
        degrees: Some(degrees.to_vec()),
    };
    let record = |name: &str, construction, expected, annotations| GroupRecord {
        name: name.to_string(),
        construction,
        expected,
        annotations,
        provenance: "builtin".into(),
    };
    Ok(match name {
        "trivial" => record(
            "trivial",
            generators(1, &[]),
            fp(1, 1, &[], &[1]),
            Annotations {
                gap_id: Some("1,1".into()),
                ..Default::default()
            },
        ),
        "c2" => record(
            "c2",
            Construction::Recipe(Recipe::Cyclic { n: 2 }),
            fp(2, 2, &[2], &[1, 1]),
            Annotations::default(),
        ),
        "c3" => record(
            "c3",
            Construction::Recipe(Recipe::Cyclic { n: 3 }),
            fp(3, 3, &[3], &[1, 1, 1]),
            Annotations::default(),
        ),
        "c4" => record(
            "c4",
            Construction::Recipe(Recipe::Cyclic { n: 4 }),
            fp(4, 4, &[4], &[1, 1, 1, 1]),
            Annotations::default(),
        ),
        "c2xc2" => record(
            "c2xc2",
            generators(4, &[&[2, 1, 3, 4], &[1, 2, 4, 3]]),
            fp(4, 4, &[2, 2], &[1, 1, 1, 1]),
            Annotations::default(),
        ),
        "s3" => record(
            "s3",
            generators(3, &[&[2, 1, 3], &[2, 3, 1]]),
            fp(6, 3, &[2], &[1, 1, 2]),
            Annotations::default(),
        ),
        "dic3" => record(
            "dic3",
            Construction::Recipe(Recipe::Dicyclic { n: 3 }),
            fp(12, 6, &[4], &[1, 1, 1, 1, 2, 2]),
            Annotations {
                gap_id: Some("12,1".into()),
                notes: Some("dicyclic group <x, y | x^6 = 1, y^2 = x^3, y x y^-1 = x^-1>".into()),
                ..Default::default()
            },
        ),
        "sg48_3" => record(
            "sg48_3",
            Construction::Recipe(Recipe::AbelianByCyclic {
                modulus: 4,
                matrix: [[0, -1], [1, -1]],
                cyclic_order: 3,
            }),
            fp(48, 8, &[3], &[1, 1, 1, 3, 3, 3, 3, 3]),
            Annotations {
                gap_id: Some("48,3".into()),
                notes: Some(
                    "(Z4 x Z4) x| C3 with (a, b) -> (-b, a - b); the polynomial is the \
                     degree-12 field whose Galois closure has this group (unverified)"
                        .into(),
                ),
                polynomial: Some(SG48_3_FIELD_POLYNOMIAL.to_vec()),
            },
        ),
        other => return Err(Error::UnknownGroup(other.to_string())),
    })
}

/// Characters of the dicyclic group of order 12 used by the worked examples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Dic3Characters {
    /// The unique nontrivial rational linear character.
    pub epsilon: usize,
    /// The unique rational degree-2 irreducible with indicator `+1`.
    pub theta: usize,
}

/// Locates `epsilon` and `theta` in a table of the dicyclic group of order 12,
/// failing unless each is unique.
pub fn dic3_characters(table: &CharacterTable) -> Result<Dic3Characters> {
    let rational = |i: usize| {
        table
            .irreducible(i)
            .values()
            .iter()
            .all(|v| v.as_rational().is_some())
    };
    let eps: Vec<usize> = (1..table.len())
        .filter(|&i| table.degrees()[i] == 1 && rational(i))
        .collect();
    let mut theta = Vec::new();
    for i in 0..table.len() {
        if table.degrees()[i] == 2
            && rational(i)
            && frobenius_schur_indicator(table.irreducible(i))?.is_one()
        {
            theta.push(i);
        }
    }
    match (eps.as_slice(), theta.as_slice()) {
        ([e], [t]) => Ok(Dic3Characters {
            epsilon: *e,
            theta: *t,
        }),
        _ => Err(Error::TableInconsistent(format!(
            "expected one nontrivial rational linear character and one rational orthogonal \
             degree-2 character, found {} and {}",
            eps.len(),
            theta.len()
        ))),
    }
}

/// Faithful degree-3 irreducibles whose values lie in `Q(i)`.
pub fn faithful_gaussian_cubics(table: &CharacterTable) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for i in 0..table.len() {
        if table.degrees()[i] == 3 && table.is_faithful(i) {
            let field = field_of_values(table.irreducible(i).values())?;
            if field.in_gaussian_rationals {
                out.push(i);
            }
        }
    }
    Ok(out)
}

/// A realized record with its verified character table.
#[derive(Clone, Debug)]
pub struct LoadedGroup {
    pub record: GroupRecord,
    pub group: Arc<GroupData>,
    pub table: CharacterTable,
}

/// Realizes a record, computes its character table and, for the bundled groups
/// that feed the worked examples, checks the structure those examples rely on.
pub fn load(record: &GroupRecord, bound: usize) -> Result<LoadedGroup> {
    let (group, table) = realize_with_table(record, bound)?;
    let table = match table {
        Some(t) => t,
        None => character_table(&group)?,
    };
    if record.provenance == "builtin" {
        match record.name.as_str() {
            "dic3" => {
                dic3_characters(&table)?;
            }
            "sg48_3" => {
                if group.abelianization().iter().product::<u64>() != 3 {
                    return Err(Error::TableInconsistent("abelianization is not of order 3".into()));
                }
                let cubics = faithful_gaussian_cubics(&table)?;
                if cubics.len() < 2 {
                    return Err(Error::TableInconsistent(format!(
                        "expected at least two faithful degree-3 characters with values in Q(i), found {}",
                        cubics.len()
                    )));
                }
            }
            _ => {}
        }
    }
    Ok(LoadedGroup {
        record: record.clone(),
        group,
        table,
    })
}

/// Loads a bundled group by name.
pub fn load_builtin(name: &str, bound: usize) -> Result<LoadedGroup> {
    load(&builtin(name)?, bound)
}

/// Settings for the optional remote fetcher.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemoteConfig {
    pub enabled: bool,
    pub base_url: String,
    pub timeout_secs: u64,
}

impl Default for RemoteConfig {
    fn default() -> Self {
        Self {
            enabled: false,
            base_url: "https://www.lmfdb.org".into(),
            timeout_secs: 30,
        }
    }
}

/// URL queried for an abstract-group label.
pub fn remote_url(config: &RemoteConfig, label: &str) -> String {
    format!(
        "{}/api/gps_groups/?label={}&_format=json",
        config.base_url.trim_end_matches('/'),
        label
    )
}

/// Decodes a permutation from its lexicographic rank in `S_d` (Lehmer code).
pub fn permutation_from_rank(degree: usize, mut rank: u128) -> Result<Permutation> {
    let mut factorial = vec![1u128; degree + 1];
    for i in 1..=degree {
        factorial[i] = factorial[i - 1].saturating_mul(i as u128);
    }
    if rank >= factorial[degree] {
        return Err(Error::NotAPermutation(format!("rank {rank} out of range for degree {degree}")));
    }
    let mut pool: Vec<u32> = (0..degree as u32).collect();
    let mut images = Vec::with_capacity(degree);
    for i in (0..degree).rev() {
        let idx = (rank / factorial[i]) as usize;
        rank %= factorial[i];
        images.push(pool.remove(idx));
    }
    Permutation::from_zero_based(images)
}

/// Parses the database response `{"data": [{"order", "transitive_degree",
/// "perm_gens"}]}`; generators are either 1-based image arrays or Lehmer ranks.
pub fn parse_remote_response(label: &str, body: &str, url: &str) -> Result<GroupRecord> {
    let value: serde_json::Value = serde_json::from_str(body).map_err(|e| parse_error(&e))?;
    let shape = |msg: &str| Error::Parse {
        line: 0,
        column: 0,
        message: format!("unexpected response shape: {msg}"),
    };
    let data = value
        .get("data")
        .and_then(|d| d.as_array())
        .ok_or_else(|| shape("missing `data` array"))?;
    let entry = data.first().ok_or_else(|| Error::NotFound(label.to_string()))?;
    let degree = entry
        .get("transitive_degree")
        .or_else(|| entry.get("perm_degree"))
        .and_then(|d| d.as_u64())
        .ok_or_else(|| shape("missing permutation degree"))? as usize;
    let gens = entry
        .get("perm_gens")
        .and_then(|g| g.as_array())
        .ok_or_else(|| shape("missing `perm_gens`"))?;
    let mut generators = Vec::with_capacity(gens.len());
    for g in gens {
        let p = if let Some(arr) = g.as_array() {
            let images: Vec<u32> = arr
                .iter()
                .map(|x| x.as_u64().map(|v| v as u32).ok_or_else(|| shape("non-integer image")))
                .collect::<Result<_>>()?;
            if images.len() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: images.len(),
                });
            }
            Permutation::from_one_based(&images)?
        } else if let Some(rank) = g.as_u64() {
            permutation_from_rank(degree, rank as u128)?
        } else {
            return Err(shape("generator is neither an array nor a rank"));
        };
        generators.push(p);
    }
    let order = entry.get("order").and_then(|o| o.as_u64()).map(|o| o as usize);
    Ok(GroupRecord {
        name: label.to_string(),
        construction: Construction::Generators { degree, generators },
        expected: Fingerprints {
            order,
            ..Default::default()
        },
        annotations: Annotations::default(),
        provenance: url.to_string(),
    })
}

/// Downloads permutation generators for an abstract-group label. Fetched data is
/// untrusted: callers realize the record, which re-verifies everything locally.
pub fn fetch_remote_group(label: &str, config: &RemoteConfig) -> Result<GroupRecord> {
    if !config.enabled {
        return Err(Error::FeatureDisabled);
    }
    fetch_impl(label, config)
}

#[cfg(feature = "remote")]
fn fetch_impl(label: &str, config: &RemoteConfig) -> Result<GroupRecord> {
    let url = remote_url(config, label);
    let client = reqwest::blocking::Client::builder()
        .timeout(std::time::Duration::from_secs(config.timeout_secs))
        .build()
        .map_err(|e| Error::Remote(e.to_string()))?;
    let response = client
        .get(&url)
        .send()
        .map_err(|e| Error::Remote(e.to_string()))?;
    if response.status() == reqwest::StatusCode::NOT_FOUND {
        return Err(Error::NotFound(label.to_string()));
    }
    let response = response
        .error_for_status()
        .map_err(|e| Error::Remote(e.to_string()))?;
    let body = response.text().map_err(|e| Error::Remote(e.to_string()))?;
    parse_remote_response(label, &body, &url)
}

#[cfg(not(feature = "remote"))]
fn fetch_impl(_label: &str, _config: &RemoteConfig) -> Result<GroupRecord> {
    Err(Error::FeatureDisabled)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_builtins_realize() {
        for name in BUILTIN_NAMES {
            let record = builtin(name).unwrap();
            let g = realize(&record, 20_000).unwrap();
            assert_eq!(Some(g.order()), record.expected.order, "{name}");
        }
        assert!(matches!(builtin("nope"), Err(Error::UnknownGroup(_))));
    }

    #[test]
    fn worked_example_structure() {
        let dic = load_builtin("dic3", 1000).unwrap();
        let c = dic3_characters(&dic.table).unwrap();
        assert_eq!(dic.table.degrees()[c.theta], 2);
        assert!(!dic.table.is_faithful(c.theta));
        let big = load_builtin("sg48_3", 1000).unwrap();
        assert_eq!(big.group.order(), 48);
        assert_eq!(faithful_gaussian_cubics(&big.table).unwrap().len(), 4);
        for name in BUILTIN_NAMES {
            load_builtin(name, 1000).unwrap().table.verify().unwrap();
        }
    }

    #[test]
    fn realization_is_deterministic() {
        let r = builtin("sg48_3").unwrap();
        let a = realize(&r, 100).unwrap();
        let b = realize(&r, 100).unwrap();
        assert_eq!(a.elements(), b.elements());
        assert_eq!(a.classes(), b.classes());
    }

    #[test]
    fn group_file_parsing() {
        let rec = parse_group_file(r#"{"name":"S3","degree":3,"generators":[[2,1,3],[2,3,1]]}"#)
            .unwrap();
        assert_eq!(realize(&rec, 100).unwrap().order(), 6);

        let bad = parse_group_file(r#"{"name":"x","degree":3,"generators":[[1,1,2]]}"#);
        assert!(matches!(bad, Err(Error::NotAPermutation(_))));

        let wrong = parse_group_file(
            r#"{"name":"c3","degree":3,"generators":[[2,3,1]],"expected":{"order":6}}"#,
        )
        .unwrap();
        match realize(&wrong, 100) {
            Err(Error::Fingerprint { fingerprint, .. }) => assert_eq!(fingerprint, "order"),
            other => panic!("expected fingerprint error, got {other:?}"),
        }

        match parse_group_file("{\"name\": \"x\",\n \"degree\": }") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn lehmer_ranks() {
        assert_eq!(permutation_from_rank(3, 0).unwrap().one_based(), vec![1, 2, 3]);
        assert_eq!(permutation_from_rank(3, 5).unwrap().one_based(), vec![3, 2, 1]);
        assert!(permutation_from_rank(3, 6).is_err());
    }

    #[test]
    fn remote_response_shapes() {
        let body = r#"{"data":[{"label":"6.1","order":6,"transitive_degree":3,"perm_gens":[[2,1,3],3]}]}"#;
        let rec = parse_remote_response("6.1", body, "http://example").unwrap();
        assert_eq!(rec.provenance, "http://example");
        assert_eq!(realize(&rec, 100).unwrap().order(), 6);
        assert!(matches!(
            parse_remote_response("9.9", r#"{"data":[]}"#, "u"),
            Err(Error::NotFound(_))
        ));
        assert!(matches!(
            parse_remote_response("9.9", r#"{"rows":[]}"#, "u"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn fetch_disabled_by_default() {
        let cfg = RemoteConfig::default();
        assert!(matches!(fetch_remote_group("48.3", &cfg), Err(Error::FeatureDisabled)));
    }
}
