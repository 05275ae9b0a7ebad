//! Loading search spaces from JSON files or bundled names.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use hypabc::{RawParamSpec, SearchSpace};

/// Bundled spaces usable by name instead of a file path.
pub const BUNDLED: &[(&str, &str)] = &[
    ("rf", include_str!("../../../spaces/rf.json")),
    ("xgboost", include_str!("../../../spaces/xgboost.json")),
    ("svm", include_str!("../../../spaces/svm.json")),
    ("knn", include_str!("../../../spaces/knn.json")),
];

/// Parse a JSON array of parameter descriptions into a validated space.
pub fn parse_space(json: &str) -> Result<SearchSpace> {
    let raw: Vec<RawParamSpec> = serde_json::from_str(json).context("malformed space file")?;
    SearchSpace::from_raw(&raw).map_err(|e| anyhow::anyhow!("invalid space: {e}"))
}

/// Load a space from a bundled name (`rf`, `xgboost`, `svm`, `knn`) or a
/// file path.
pub fn load_space(spec: &str) -> Result<SearchSpace> {
    if let Some((_, json)) = BUNDLED.iter().find(|(name, _)| *name == spec) {
        return parse_space(json).with_context(|| format!("bundled space `{spec}`"));
    }
    let path = Path::new(spec);
    let json = fs::read_to_string(path)
        .with_context(|| format!("cannot read space file `{spec}` (bundled names: rf, xgboost, svm, knn)"))?;
    parse_space(&json).with_context(|| format!("space file `{spec}`"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use hypabc::ParamKind;

    #[test]
    fn bundled_spaces_parse_and_match_their_tables() {
        let rf = load_space("rf").unwrap();
        assert_eq!(rf.dimension(), 6);
        let names: Vec<_> = rf.params().iter().map(|p| p.name()).collect();
        assert_eq!(
            names,
            ["n_estimators", "criterion", "max_depth", "max_features", "min_samples_split", "min_samples_leaf"]
        );
        assert_eq!(rf.params()[0].kind(), &ParamKind::Integer { lower: 5, upper: 500 });

        let xgb = load_space("xgboost").unwrap();
        assert_eq!(xgb.dimension(), 5);
        assert_eq!(
            xgb.params()[3].kind(),
            &ParamKind::Continuous { lower: 0.0, upper: 1.0, lower_exclusive: true }
        );

        let svm = load_space("svm").unwrap();
        assert_eq!(svm.dimension(), 2);
        assert_eq!(
            svm.params()[1].kind(),
            &ParamKind::Categorical {
                choices: vec!["linear".into(), "poly".into(), "rbf".into(), "sigmoid".into()]
            }
        );

        let knn = load_space("knn").unwrap();
        assert_eq!(knn.dimension(), 3);
        assert_eq!(knn.params()[0].kind(), &ParamKind::Integer { lower: 1, upper: 25 });
        assert_eq!(
            knn.params()[2].kind(),
            &ParamKind::Continuous { lower: 1.0, upper: 3.0, lower_exclusive: false }
        );
    }

    #[test]
    fn paths_load_and_errors_name_the_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("space.json");
        std::fs::write(&path, r#"[{ "name": "x", "type": "integer", "min": 0, "max": 3 }]"#)
            .unwrap();
        let space = load_space(path.to_str().unwrap()).unwrap();
        assert_eq!(space.dimension(), 1);

        let err = load_space("no_such_file.json").unwrap_err();
        assert!(err.to_string().contains("no_such_file.json"));

        std::fs::write(&path, r#"[{ "name": "x", "type": "float" }]"#).unwrap();
        let err = load_space(path.to_str().unwrap()).unwrap_err();
        assert!(format!("{err:#}").contains("unknown type"), "{err:#}");
    }
}
