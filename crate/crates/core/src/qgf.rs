//! File formats: QGF grid functions (a single JSON document), domain files,
//! and boundary-set directories.
//!
//! QGF layout:
//! `{"qgf": 1, "n": <int>, "axes": [[...], ...], "values": [...], "mask": [...]?}`
//! with values row-major (last axis fastest). Doubles are serialized via
//! shortest round-trip decimals, so save/load is bit-exact.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extension::{DomainFile, ProductDomain};
use crate::grid::{GridFunction, Mesh, NBox};
use crate::patchwork::{BoundarySet, FacePair};

pub const QGF_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct QgfFile {
    qgf: u32,
    n: usize,
    axes: Vec<Vec<f64>>,
    values: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mask: Option<Vec<bool>>,
}

pub fn qgf_to_string(f: &GridFunction) -> String {
    let values = match f.mask() {
        // undefined entries carry no information; store zeros
        Some(mask) => f
            .values()
            .iter()
            .zip(mask)
            .map(|(&v, &ok)| if ok { v } else { 0.0 })
            .collect(),
        None => f.values().to_vec(),
    };
    let file = QgfFile {
        qgf: QGF_VERSION,
        n: f.ndim(),
        axes: f.mesh().axes().to_vec(),
        values,
        mask: f.mask().map(<[bool]>::to_vec),
    };
    serde_json::to_string(&file).expect("grid serialization cannot fail")
}

pub fn qgf_from_str(text: &str) -> Result<GridFunction> {
    let file: QgfFile = serde_json::from_str(text)?;
    if file.qgf != QGF_VERSION {
        return Err(Error::Format(format!(
            "unsupported qgf version {}",
            file.qgf
        )));
    }
    if file.n == 0 {
        return Err(Error::Format("qgf: n must be positive".into()));
    }
    if file.axes.len() != file.n {
        return Err(Error::Format(format!(
            "qgf: n = {} but {} axes given",
            file.n,
            file.axes.len()
        )));
    }
    let mesh = Mesh::new(file.axes)?;
    match file.mask {
        Some(mask) => GridFunction::new_masked(mesh, file.values, mask),
        None => GridFunction::new(mesh, file.values),
    }
}

pub fn save_qgf(f: &GridFunction, path: &Path) -> Result<()> {
    fs::write(path, qgf_to_string(f))?;
    Ok(())
}

pub fn load_qgf(path: &Path) -> Result<GridFunction> {
    qgf_from_str(&read_file(path)?)
}

pub fn load_domain(path: &Path) -> Result<ProductDomain> {
    let file: DomainFile = serde_json::from_str(&read_file(path)?)?;
    file.into_domain()
}

#[derive(Debug, Serialize, Deserialize)]
struct BoxFile {
    a: Vec<f64>,
    b: Vec<f64>,
}

/// Load a boundary set from a directory holding `box.json` plus the 2n face
/// files `F1.qgf, F1p.qgf, ..., Fn.qgf, Fnp.qgf` (1-based axis numbering,
/// `p` marking the upper face).
pub fn load_boundary_dir(dir: &Path) -> Result<BoundarySet> {
    let bx_file: BoxFile = serde_json::from_str(&read_file(&dir.join("box.json"))?)?;
    let bx = NBox::new(bx_file.a, bx_file.b)?;
    let n = bx.ndim();
    if n < 2 {
        return Err(Error::Format(
            "boundary directories need dimension >= 2".into(),
        ));
    }
    let mut faces = Vec::with_capacity(n);
    for k in 0..n {
        let lower = load_qgf(&dir.join(format!("F{}.qgf", k + 1)))?;
        let upper = load_qgf(&dir.join(format!("F{}p.qgf", k + 1)))?;
        faces.push(FacePair { lower, upper });
    }
    // reconstruct the box mesh: axis k is carried by any face other than k
    let mut axes = Vec::with_capacity(n);
    for k in 0..n {
        let source = usize::from(k == 0);
        let position = if source < k { k - 1 } else { k };
        axes.push(faces[source].lower.mesh().axis(position).to_vec());
    }
    let mesh = Mesh::new(axes)?;
    let mesh_box = mesh.bounding_box();
    for k in 0..n {
        if (mesh_box.a[k] - bx.a[k]).abs() > 1e-12 || (mesh_box.b[k] - bx.b[k]).abs() > 1e-12 {
            return Err(Error::Format(format!(
                "box.json endpoints on axis {} do not match the face meshes",
                k + 1
            )));
        }
    }
    BoundarySet::new(mesh, faces)
}

pub fn save_boundary_dir(bs: &BoundarySet, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let bx = bs.nbox();
    let box_file = BoxFile { a: bx.a, b: bx.b };
    fs::write(dir.join("box.json"), serde_json::to_string(&box_file)?)?;
    for k in 0..bs.ndim() {
        save_qgf(bs.face(k, false), &dir.join(format!("F{}.qgf", k + 1)))?;
        save_qgf(bs.face(k, true), &dir.join(format!("F{}p.qgf", k + 1)))?;
    }
    Ok(())
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;

    #[test]
    fn qgf_roundtrip_is_bit_exact() {
        let mesh = Mesh::new(vec![vec![0.0, 1.0 / 3.0, 0.7, 1.0], vec![0.0, 0.5, 1.0]]).unwrap();
        let f = GridFunction::tabulate(mesh, |x| x[0] * x[1] / 3.0);
        let text = qgf_to_string(&f);
        let g = qgf_from_str(&text).unwrap();
        assert_eq!(f.values(), g.values());
        assert_eq!(f.mesh(), g.mesh());
        // serialization is deterministic
        assert_eq!(text, qgf_to_string(&g));
    }

    #[test]
    fn qgf_rejects_malformed_documents() {
        assert!(qgf_from_str(r#"{"qgf": 2, "n": 1, "axes": [[0,1]], "values": [0,1]}"#).is_err());
        assert!(qgf_from_str(r#"{"qgf": 1, "n": 0, "axes": [], "values": []}"#).is_err());
        assert!(qgf_from_str(r#"{"qgf": 1, "n": 2, "axes": [[0,1]], "values": [0,1]}"#).is_err());
        // length mismatch
        assert!(
            qgf_from_str(r#"{"qgf": 1, "n": 1, "axes": [[0,1]], "values": [0,1,2]}"#).is_err()
        );
        // unsorted axis
        assert!(
            qgf_from_str(r#"{"qgf": 1, "n": 1, "axes": [[0,0.5,0.5,1]], "values": [0,1,2,3]}"#)
                .is_err()
        );
        assert!(qgf_from_str("not json").is_err());
    }

    #[test]
    fn masked_qgf_roundtrip() {
        let mesh = Mesh::new(vec![vec![0.0, 0.5, 1.0]]).unwrap();
        let f = GridFunction::new_masked(
            mesh,
            vec![0.0, f64::NAN, 1.0],
            vec![true, false, true],
        )
        .unwrap();
        let g = qgf_from_str(&qgf_to_string(&f)).unwrap();
        assert_eq!(g.mask(), Some(&[true, false, true][..]));
        assert_eq!(g.value_flat(0), 0.0);
        assert_eq!(g.value_flat(1), 0.0);
        assert_eq!(g.value_flat(2), 1.0);
    }

    #[test]
    fn boundary_dir_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let bx = NBox::new(vec![0.25; 3], vec![0.75; 3]).unwrap();
        let mesh = Mesh::uniform_box(&bx, 5).unwrap();
        let bs = BoundarySet::from_function(mesh, |x| {
            examples::old3d_value(x[0], x[1], x[2])
        })
        .unwrap();
        save_boundary_dir(&bs, dir.path()).unwrap();
        let loaded = load_boundary_dir(dir.path()).unwrap();
        assert_eq!(loaded.ndim(), 3);
        for k in 0..3 {
            assert_eq!(loaded.face(k, false).values(), bs.face(k, false).values());
            assert_eq!(loaded.face(k, true).values(), bs.face(k, true).values());
        }
        assert!((loaded.volume() - bs.volume()).abs() < 1e-15);
    }
}
