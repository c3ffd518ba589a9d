//! Flat declarative sweep files.
//!
//! A sweep file is TOML mapping configuration keys to a value or a list of
//! values. The run expands the cartesian product with `d` outermost, then
//! `p`, then `r` fastest. Keys omitted from the file fall back to the
//! command-line flags.

use serde::Deserialize;

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn values(&self) -> Vec<T> {
        match self {
            OneOrMany::One(v) => vec![v.clone()],
            OneOrMany::Many(vs) => vs.clone(),
        }
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepFile {
    pub model: Option<String>,
    pub d: Option<OneOrMany<usize>>,
    pub p: Option<OneOrMany<f64>>,
    pub r: Option<OneOrMany<f64>>,
    pub samples: Option<u64>,
    pub epsilon: Option<f64>,
    pub delta: Option<f64>,
    pub seed: Option<u64>,
}

pub fn parse_sweep(text: &str) -> anyhow::Result<SweepFile> {
    Ok(toml::from_str(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_and_list_values() {
        let sweep = parse_sweep(
            r#"
model = "code"
d = [3, 5]
p = [0.01, 0.02]
r = 0.5
samples = 1000
seed = 7
"#,
        )
        .unwrap();
        assert_eq!(sweep.model.as_deref(), Some("code"));
        assert_eq!(sweep.d.unwrap().values(), vec![3, 5]);
        assert_eq!(sweep.p.unwrap().values(), vec![0.01, 0.02]);
        assert_eq!(sweep.r.unwrap().values(), vec![0.5]);
        assert_eq!(sweep.samples, Some(1000));
        assert_eq!(sweep.seed, Some(7));
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(parse_sweep("bogus = 3").is_err());
    }
}
