use std::path::Path;
use std::sync::Arc;

use thiserror::Error;

use super::bound::{BoundError, BoundExpr};
use super::universe::{unpad, UniverseError, UniverseTemplate};
use crate::pstring::PString;
use crate::tm::{builtin, TmError, TmSpec, BUILTINS};

#[derive(Debug, Clone)]
pub enum InstanceKind {
    Direct {
        universe: UniverseTemplate,
        verifier: Arc<TmSpec>,
        witness: BoundExpr,
        time: BoundExpr,
    },
    /// `L' = {pad(x) : x ∈ L}` with `|pad(x)| = f(|x|)`. The verifier strips
    /// the prefix on the host side and runs the inner verifier on the rest.
    Padded {
        f: BoundExpr,
        inner: Box<DtiwiInstance>,
    },
}

#[derive(Debug, Clone)]
pub struct DtiwiInstance {
    pub name: String,
    pub kind: InstanceKind,
}

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("manifest line {line}: {msg}")]
    Manifest { line: usize, msg: String },
    #[error(transparent)]
    Universe(#[from] UniverseError),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    Machine(#[from] TmError),
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// What deciding `x` reduces to once padding layers are peeled off: the
/// innermost direct instance and the string it sees, or `None` when some
/// layer rejects outright.
pub struct Core<'a> {
    pub universe: &'a UniverseTemplate,
    pub verifier: &'a TmSpec,
    pub witness: &'a BoundExpr,
    pub time: &'a BoundExpr,
    pub x: PString,
}

impl DtiwiInstance {
    pub fn direct(
        name: impl Into<String>,
        universe: UniverseTemplate,
        verifier: Arc<TmSpec>,
        witness: BoundExpr,
        time: BoundExpr,
    ) -> DtiwiInstance {
        DtiwiInstance {
            name: name.into(),
            kind: InstanceKind::Direct {
                universe,
                verifier,
                witness,
                time,
            },
        }
    }

    pub fn universe(&self) -> UniverseTemplate {
        match &self.kind {
            InstanceKind::Direct { universe, .. } => universe.clone(),
            InstanceKind::Padded { inner, .. } => {
                UniverseTemplate::Padded(Box::new(inner.universe()))
            }
        }
    }

    pub fn in_universe(&self, x: &PString) -> Result<bool, UniverseError> {
        self.universe().matches(x)
    }

    /// Peels padding layers. A padded layer passes `y` through only when it
    /// has the form `pad(x)` with `|y| = f(|x|)`; its verifier rejects every
    /// other string.
    pub fn core(&self, y: &PString) -> Result<Option<Core<'_>>, InstanceError> {
        match &self.kind {
            InstanceKind::Direct {
                universe,
                verifier,
                witness,
                time,
            } => Ok(Some(Core {
                universe,
                verifier,
                witness,
                time,
                x: y.clone(),
            })),
            InstanceKind::Padded { f, inner } => {
                let Some(x) = unpad(y) else {
                    return Ok(None);
                };
                if f.eval(x.len() as u64)? != y.len() as u64 {
                    return Ok(None);
                }
                inner.core(&x)
            }
        }
    }

    /// Witness bound as a function of `|y|`; for padded instances this is
    /// the inner bound at `|unpad(y)|`.
    pub fn witness_bound(&self, y: &PString) -> Result<usize, InstanceError> {
        match &self.kind {
            InstanceKind::Direct { witness, .. } => Ok(witness.eval_usize(y.len())?),
            InstanceKind::Padded { inner, .. } => match unpad(y) {
                Some(x) => inner.witness_bound(&x),
                None => Ok(0),
            },
        }
    }

    /// Parses a line-oriented manifest. Verifier paths are resolved relative
    /// to `base`; bare builtin names are looked up first.
    ///
    /// ```text
    /// name: parity-bits
    /// universe: {01p}^(n)
    /// verifier: parity
    /// witness: n
    /// time: n + 1
    /// pad: n^2 + 1
    /// ```
    pub fn parse_manifest(src: &str, base: &Path) -> Result<DtiwiInstance, InstanceError> {
        let mut name = None;
        let mut universe = None;
        let mut verifier = None;
        let mut witness = None;
        let mut time = None;
        let mut pads = Vec::new();
        for (idx, raw) in src.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once(':') else {
                return Err(InstanceError::Manifest {
                    line: line_no,
                    msg: format!("expected `key: value`, got {line:?}"),
                });
            };
            let value = value.trim();
            match key.trim() {
                "name" => name = Some(value.to_string()),
                "universe" => universe = Some(UniverseTemplate::parse(value)?),
                "verifier" => verifier = Some(load_verifier(value, base)?),
                "witness" => witness = Some(BoundExpr::parse(value)?),
                "time" => time = Some(BoundExpr::parse(value)?),
                "pad" => pads.push(BoundExpr::parse(value)?),
                other => {
                    return Err(InstanceError::Manifest {
                        line: line_no,
                        msg: format!("unknown key {other:?}"),
                    })
                }
            }
        }
        let missing = |k: &str| InstanceError::Manifest {
            line: 0,
            msg: format!("missing `{k}`"),
        };
        let mut inst = DtiwiInstance::direct(
            name.unwrap_or_else(|| "instance".into()),
            universe.ok_or_else(|| missing("universe"))?,
            Arc::new(verifier.ok_or_else(|| missing("verifier"))?),
            witness.ok_or_else(|| missing("witness"))?,
            time.ok_or_else(|| missing("time"))?,
        );
        for f in pads {
            inst = DtiwiInstance {
                name: format!("{}+pad", inst.name),
                kind: InstanceKind::Padded {
                    f,
                    inner: Box::new(inst),
                },
            };
        }
        Ok(inst)
    }

    pub fn load_manifest(path: &Path) -> Result<DtiwiInstance, InstanceError> {
        let src = std::fs::read_to_string(path).map_err(|e| InstanceError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        DtiwiInstance::parse_manifest(&src, path.parent().unwrap_or(Path::new(".")))
    }
}

fn load_verifier(value: &str, base: &Path) -> Result<TmSpec, InstanceError> {
    if BUILTINS.contains(&value) {
        return Ok(builtin(value)?);
    }
    let path = base.join(value);
    let text = std::fs::read_to_string(&path).map_err(|e| InstanceError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    Ok(TmSpec::parse(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_with_padding() {
        let src = "# demo\nname: par\nuniverse: {01p}^(n)\nverifier: parity\nwitness: n\ntime: n + 1\npad: n^2 + 1\n";
        let inst = DtiwiInstance::parse_manifest(src, Path::new(".")).unwrap();
        assert_eq!(inst.name, "par+pad");
        assert_eq!(inst.universe().to_string(), "pad({01p}^(n))");
        let y: PString = "11111101p".parse().unwrap();
        assert_eq!(y.len(), 9);
        assert!(inst.in_universe(&y).unwrap());
        // |unpad(y)| = 2, f(2) = 5 != 9
        assert!(inst.core(&y).unwrap().is_none());
        let y: PString = "1101p".parse().unwrap();
        let core = inst.core(&y).unwrap().unwrap();
        assert_eq!(core.x.to_string(), "1p");
    }

    #[test]
    fn manifest_errors() {
        let err = |s: &str| DtiwiInstance::parse_manifest(s, Path::new(".")).unwrap_err();
        assert!(matches!(
            err("universe 0"),
            InstanceError::Manifest { line: 1, .. }
        ));
        assert!(matches!(err("color: red"), InstanceError::Manifest { .. }));
        assert!(matches!(
            err("universe: 0\n"),
            InstanceError::Manifest { line: 0, .. }
        ));
        assert!(matches!(err("verifier: nope.tm"), InstanceError::Io { .. }));
        assert!(matches!(err("witness: n +"), InstanceError::Bound(_)));
    }
}
