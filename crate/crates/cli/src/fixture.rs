//! Fixture files: JSON descriptions of a finite crossed module or a matrix
//! Lie 2-group, with the seed, sample count and tolerances used to check
//! them.

use std::fmt;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use twogroup::finite_core::{build_group, two_group_from_crossed_module, CrossedModule, Internal2Group, TwoGroupError};
use twogroup::lie2::{BlockModel, Lie2Error, MatrixLie2Group};
use twogroup::matrix_lie::{Mat, MatrixLieGroup, Membership};
use twogroup::multvf::{FieldCategory, MultVfError};

use crate::CliError;

fn default_samples() -> usize {
    twogroup::multvf::DEFAULT_PAIR_SAMPLES
}

fn default_membership_tol() -> f64 {
    1e-9
}

/// The on-disk form of a fixture.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureFile {
    pub name: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(flatten)]
    pub payload: Payload,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Finite { crossed_module: CrossedModuleSpec },
    Matrix { matrix: MatrixSpec },
}

/// A crossed module `(H, G, boundary, action)` by Cayley tables.
/// `action[x][k]` is the image of `k` under `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossedModuleSpec {
    pub h_table: Vec<Vec<usize>>,
    pub g_table: Vec<Vec<usize>>,
    pub boundary: Vec<usize>,
    pub action: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixSpec {
    pub h: GroupSpec,
    /// Defaults to `h`.
    #[serde(default)]
    pub g: Option<GroupSpec>,
    pub model: BlockModel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub name: String,
    /// Lie algebra basis, each matrix given by rows.
    pub basis: Vec<Vec<Vec<f64>>>,
    pub membership: Membership,
    #[serde(default = "default_membership_tol")]
    pub membership_tol: f64,
}

/// Bounds applied by the suites. Every field has a default, so fixtures only
/// list the ones they change.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Sampled 2-group axioms, unit section and exact identities.
    pub structure: f64,
    /// Lie functor against the adjoint oracle, relative.
    pub lie_functor: f64,
    /// Structure constants against finite-difference brackets.
    pub bracket_constants: f64,
    pub circledast: f64,
    pub functoriality: f64,
    pub j_inverse: f64,
    /// Brackets of fields against brackets in the algebra.
    pub field_brackets: f64,
    /// Field brackets when the algebra is abelian.
    pub abelian_brackets: f64,
    pub invariance: f64,
    /// Reconstruction bound for invariant fields.
    pub reconstruction: f64,
    /// The control field must be at least this far from invariant.
    pub control_min: f64,
    /// Weight of the inner field in the control field.
    pub control_eps: f64,
    pub lambda: f64,
    pub limit_reconstruction: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            structure: 1e-8,
            lie_functor: 1e-5,
            bracket_constants: 1e-5,
            circledast: 1e-6,
            functoriality: 1e-6,
            j_inverse: 1e-6,
            field_brackets: 1e-4,
            abelian_brackets: 1e-8,
            invariance: 1e-6,
            reconstruction: 1e-5,
            control_min: 1e-2,
            control_eps: 0.5,
            lambda: 1e-6,
            limit_reconstruction: 1e-6,
        }
    }
}

/// A validated fixture.
#[derive(Clone)]
pub struct Fixture {
    pub name: String,
    pub seed: u64,
    pub samples: usize,
    pub tolerances: Tolerances,
    pub body: FixtureBody,
    pub file: FixtureFile,
}

#[derive(Clone)]
#[allow(clippy::large_enum_variant)]
pub enum FixtureBody {
    Finite {
        crossed_module: CrossedModule,
        two_group: Internal2Group,
    },
    Matrix(FieldCategory),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FixtureKind {
    Finite,
    Matrix,
}

impl fmt::Display for FixtureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FixtureKind::Finite => "finite",
            FixtureKind::Matrix => "matrix",
        })
    }
}

impl fmt::Debug for Fixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Fixture")
            .field("name", &self.name)
            .field("kind", &self.kind())
            .field("seed", &self.seed)
            .field("samples", &self.samples)
            .finish()
    }
}

impl Fixture {
    pub fn kind(&self) -> FixtureKind {
        match self.body {
            FixtureBody::Finite { .. } => FixtureKind::Finite,
            FixtureBody::Matrix(_) => FixtureKind::Matrix,
        }
    }

    /// `|G1|` for finite fixtures, `dim g1` for matrix ones.
    pub fn arrow_size(&self) -> usize {
        match &self.body {
            FixtureBody::Finite { two_group, .. } => two_group.g1().order(),
            FixtureBody::Matrix(x) => x.l.g1_dim,
        }
    }

    pub fn field_category(&self) -> Option<&FieldCategory> {
        match &self.body {
            FixtureBody::Matrix(x) => Some(x),
            FixtureBody::Finite { .. } => None,
        }
    }
}

pub fn load_fixture(path: &Path) -> Result<Fixture, CliError> {
    let text = fs::read_to_string(path).map_err(|error| CliError::Io {
        path: path.to_path_buf(),
        error,
    })?;
    let file: FixtureFile = serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    validate(file).map_err(|(field, message)| CliError::Validation {
        path: path.to_path_buf(),
        field,
        message,
    })
}

/// Builds the fixture's objects, returning the failing field path and
/// message on error.
pub fn validate(file: FixtureFile) -> Result<Fixture, (String, String)> {
    if file.samples == 0 {
        return Err(("samples".into(), "must be positive".into()));
    }
    let body = match &file.payload {
        Payload::Finite { crossed_module } => finite_body(crossed_module)?,
        Payload::Matrix { matrix } => FixtureBody::Matrix(matrix_body(matrix)?),
    };
    Ok(Fixture {
        name: file.name.clone(),
        seed: file.seed,
        samples: file.samples,
        tolerances: file.tolerances,
        body,
        file,
    })
}

fn finite_body(spec: &CrossedModuleSpec) -> Result<FixtureBody, (String, String)> {
    let field = |name: &str| format!("crossed_module.{name}");
    let h = build_group(&spec.h_table).map_err(|e| (field("h_table"), e.to_string()))?;
    let g = build_group(&spec.g_table).map_err(|e| (field("g_table"), e.to_string()))?;
    let cm = CrossedModule::new(h, g, spec.boundary.clone(), spec.action.clone()).map_err(|e| {
        let at = match e {
            TwoGroupError::StructureMap { .. } => field("boundary"),
            TwoGroupError::InvalidAction { .. } => field("action"),
            _ => "crossed_module".to_string(),
        };
        (at, e.to_string())
    })?;
    let two_group = two_group_from_crossed_module(&cm).map_err(|e| ("crossed_module".to_string(), e.to_string()))?;
    Ok(FixtureBody::Finite {
        crossed_module: cm,
        two_group,
    })
}

fn matrix_body(spec: &MatrixSpec) -> Result<FieldCategory, (String, String)> {
    let h = lie_group(&spec.h, "matrix.h")?;
    let g = match &spec.g {
        Some(g) => lie_group(g, "matrix.g")?,
        None => h.clone(),
    };
    let name = match &spec.g {
        Some(g) => format!("{} x| {}", spec.h.name, g.name),
        None => spec.h.name.clone(),
    };
    let group = MatrixLie2Group::new(name, h, g, spec.model).map_err(|e| match e {
        Lie2Error::Model(_) => ("matrix.model".to_string(), e.to_string()),
        _ => ("matrix".to_string(), e.to_string()),
    })?;
    FieldCategory::new(group).map_err(|e: MultVfError| ("matrix".to_string(), e.to_string()))
}

fn lie_group(spec: &GroupSpec, at: &str) -> Result<Arc<MatrixLieGroup>, (String, String)> {
    if spec.basis.is_empty() {
        return Err((format!("{at}.basis"), "at least one basis matrix is required".into()));
    }
    let mut basis = Vec::with_capacity(spec.basis.len());
    for (i, rows) in spec.basis.iter().enumerate() {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err((
                format!("{at}.basis[{i}]"),
                format!("expected a square matrix, got {n} rows"),
            ));
        }
        basis.push(Mat::from_fn(n, n, |r, c| rows[r][c]));
    }
    MatrixLieGroup::new(spec.name.clone(), basis, spec.membership.clone(), spec.membership_tol)
        .map(Arc::new)
        .map_err(|e| (format!("{at}.basis"), e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2_file() -> FixtureFile {
        serde_json::from_str(
            r#"{"name": "z2", "kind": "finite",
                "crossed_module": {"h_table": [[0,1],[1,0]], "g_table": [[0,1],[1,0]],
                                   "boundary": [0,1], "action": [[0,1],[0,1]]}}"#,
        )
        .unwrap()
    }

    #[test]
    fn defaults_fill_in() {
        let f = z2_file();
        assert_eq!(f.samples, 64);
        assert_eq!(f.seed, 0);
        assert_eq!(f.tolerances, Tolerances::default());
        assert_eq!(validate(f).unwrap().arrow_size(), 4);
    }

    #[test]
    fn bad_boundary_names_its_field() {
        let mut f = z2_file();
        if let Payload::Finite { crossed_module } = &mut f.payload {
            crossed_module.boundary = vec![1, 1];
        }
        let (field, _) = validate(f).err().unwrap();
        assert_eq!(field, "crossed_module.boundary");
    }

    #[test]
    fn ragged_basis_is_rejected() {
        let spec = GroupSpec {
            name: "bad".into(),
            basis: vec![vec![vec![1.0, 0.0], vec![0.0]]],
            membership: Membership::Invertible,
            membership_tol: 1e-9,
        };
        let (field, _) = lie_group(&spec, "matrix.h").err().unwrap();
        assert_eq!(field, "matrix.h.basis[0]");
    }
}
