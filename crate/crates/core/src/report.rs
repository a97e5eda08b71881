//! Pass/fail reports with located violations, shared by every checker.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Cap on the number of violations retained in a report; the total count is
/// kept separately so huge grids cannot blow up report size.
pub const MAX_VIOLATIONS: usize = 100;

/// What kind of constraint a violation breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// Function does not vanish at a node with a zero coordinate.
    Grounded,
    /// Margin along the all-ones line differs from the free coordinate.
    Neutral,
    /// Decrease between consecutive defined nodes along an axis.
    Increasing,
    /// Increment between consecutive defined nodes exceeds their spacing.
    Lipschitz,
    /// Mesh does not span the unit cube, so a global axiom cannot apply.
    MeshSpan,
    /// Negative volume on an elementary mesh cell (copula check only).
    CellVolume,
    /// Two boundary faces disagree where they intersect.
    FaceAgreement,
    /// Opposite faces violate `0 <= F'_k - F_k <= b_k - a_k`.
    FaceBound,
    /// Corner-anchored volume changes sign direction along a face axis.
    VolumeMonotone,
    /// Corner-anchored volume is constant in one of its arguments.
    VolumeConstant,
    /// Values decrease across a gap between domain rectangles.
    GapIncreasing,
    /// Values across a gap grow faster than the gap width.
    GapLipschitz,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ViolationKind::Grounded => "grounded",
            ViolationKind::Neutral => "neutral",
            ViolationKind::Increasing => "increasing",
            ViolationKind::Lipschitz => "1-lipschitz",
            ViolationKind::MeshSpan => "mesh-span",
            ViolationKind::CellVolume => "cell-volume",
            ViolationKind::FaceAgreement => "face-agreement",
            ViolationKind::FaceBound => "face-bound",
            ViolationKind::VolumeMonotone => "volume-monotone",
            ViolationKind::VolumeConstant => "volume-constant",
            ViolationKind::GapIncreasing => "gap-increasing",
            ViolationKind::GapLipschitz => "gap-lipschitz",
        };
        f.write_str(s)
    }
}

/// A single located constraint violation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Axis along which the violated comparison runs, if any (0-based).
    pub axis: Option<usize>,
    /// Multi-index of the offending node (or cell base, for volumes).
    pub node_index: Vec<usize>,
    /// How far past the tolerance the constraint is broken.
    pub magnitude: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Axes are reported 1-based in human-readable output.
        match self.axis {
            Some(axis) => write!(
                f,
                "{} violated on axis {} at node {:?}: excess {:.3e}",
                self.kind,
                axis + 1,
                self.node_index,
                self.magnitude
            ),
            None => write!(
                f,
                "{} violated at node {:?}: excess {:.3e}",
                self.kind, self.node_index, self.magnitude
            ),
        }
    }
}

/// Outcome of a verification pass: pass/fail plus the first violations found.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckReport {
    pub checked: String,
    pub passed: bool,
    /// Violations in deterministic scan order, capped at [`MAX_VIOLATIONS`].
    pub violations: Vec<Violation>,
    /// Total number of violations found, including ones beyond the cap.
    pub total_violations: usize,
}

impl CheckReport {
    pub fn new(checked: impl Into<String>) -> Self {
        CheckReport {
            checked: checked.into(),
            passed: true,
            violations: Vec::new(),
            total_violations: 0,
        }
    }

    pub fn record(&mut self, violation: Violation) {
        self.passed = false;
        self.total_violations += 1;
        if self.violations.len() < MAX_VIOLATIONS {
            self.violations.push(violation);
        }
    }

    /// First violation found, if any.
    pub fn first(&self) -> Option<&Violation> {
        self.violations.first()
    }

    /// Fold another report into this one, keeping the violation cap.
    pub fn merge(&mut self, other: CheckReport) {
        self.passed &= other.passed;
        self.total_violations += other.total_violations;
        for v in other.violations {
            if self.violations.len() < MAX_VIOLATIONS {
                self.violations.push(v);
            }
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed {
            write!(f, "{}: pass", self.checked)
        } else {
            write!(
                f,
                "{}: FAIL ({} violation{})",
                self.checked,
                self.total_violations,
                if self.total_violations == 1 { "" } else { "s" }
            )?;
            if let Some(v) = self.first() {
                write!(f, "; first: {v}")?;
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn violation(i: usize) -> Violation {
        Violation {
            kind: ViolationKind::Increasing,
            axis: Some(0),
            node_index: vec![i],
            magnitude: 0.5,
        }
    }

    #[test]
    fn retained_violations_are_capped_but_counted() {
        let mut report = CheckReport::new("test");
        for i in 0..250 {
            report.record(violation(i));
        }
        assert!(!report.passed);
        assert_eq!(report.violations.len(), MAX_VIOLATIONS);
        assert_eq!(report.total_violations, 250);
        assert_eq!(report.first().unwrap().node_index, vec![0]);

        let mut other = CheckReport::new("other");
        other.record(violation(999));
        report.merge(other);
        assert_eq!(report.violations.len(), MAX_VIOLATIONS);
        assert_eq!(report.total_violations, 251);
    }

    #[test]
    fn human_readable_axis_is_one_based() {
        let text = violation(3).to_string();
        assert!(text.contains("axis 1"), "{text}");
        let json = serde_json::to_string(&violation(3)).unwrap();
        assert!(json.contains("\"axis\":0"), "{json}");
    }
}
