//! Bundled demonstration scenarios and the verdict each one should reach.

use super::spec::{parse_scenario, ScenarioSpec};

/// A bundled scenario with its expected outcome.
pub struct Demo {
    pub name: &'static str,
    pub summary: &'static str,
    /// Expected outcome, as listed in the catalog.
    pub verdict: &'static str,
    pub json: &'static str,
    /// JSON pointer into the report and the value it must hold.
    pub expect: &'static [(&'static str, Expect)],
}

#[derive(Clone, Copy, Debug)]
pub enum Expect {
    Bool(bool),
    Str(&'static str),
}

impl Demo {
    pub fn spec(&self) -> ScenarioSpec {
        parse_scenario(self.json).expect("bundled scenarios parse")
    }

    /// Mismatches between the report and the expected verdicts.
    pub fn check(&self, report: &serde_json::Value) -> Vec<String> {
        let mut bad = Vec::new();
        for (ptr, want) in self.expect {
            let got = report.pointer(ptr);
            let ok = match (want, got) {
                (Expect::Bool(b), Some(serde_json::Value::Bool(g))) => b == g,
                (Expect::Str(s), Some(serde_json::Value::String(g))) => s == g,
                _ => false,
            };
            if !ok {
                bad.push(format!("{ptr}: expected {want:?}, got {}", got.map_or("nothing".into(), |v| v.to_string())));
            }
        }
        bad
    }
}

pub fn find(name: &str) -> Option<&'static Demo> {
    DEMOS.iter().find(|d| d.name == name)
}

pub static DEMOS: &[Demo] = &[
    Demo {
        name: "unramified-cyclic-6",
        verdict: "formation pass, reciprocity Z/6 -> Z/6 iso",
        summary: "G = Z/6 acting trivially on Z: a class formation with reciprocity iso",
        json: r#"{
  "name": "unramified-cyclic-6",
  "group": {"cyclic": 6},
  "coefficients": {"module": {"module": {"trivial": 0}}},
  "analyses": ["tate", "formation", "tate-nakayama"]
}"#,
        expect: &[
            ("/analyses/1/verdict", Expect::Str("pass")),
            ("/analyses/1/reciprocity/isomorphism", Expect::Bool(true)),
            ("/analyses/2/conclusion", Expect::Bool(true)),
        ],
    },
    Demo {
        name: "unramified-cyclic-4",
        verdict: "formation pass, norm table matches (G/V)^ab",
        summary: "G = Z/4 on Z: norm-group table matches G/V for every subgroup V",
        json: r#"{
  "name": "unramified-cyclic-4",
  "group": {"cyclic": 4},
  "coefficients": {"module": {"module": {"trivial": 0}}},
  "analyses": ["formation", "norm-table"]
}"#,
        expect: &[
            ("/analyses/0/verdict", Expect::Str("pass")),
            ("/analyses/1/all-isomorphisms", Expect::Bool(true)),
        ],
    },
    Demo {
        name: "klein-four-z",
        verdict: "formation fail at C2",
        summary: "Z/2 x Z/2 on Z: H^2 is not cyclic, so the formation axioms fail",
        json: r#"{
  "name": "klein-four-z",
  "group": {"product": [{"cyclic": 2}, {"cyclic": 2}]},
  "coefficients": {"module": {"module": {"trivial": 0}}},
  "analyses": ["tate", "formation", "tate-nakayama"]
}"#,
        expect: &[
            ("/analyses/1/verdict", Expect::Str("fail")),
            ("/analyses/1/c1", Expect::Str("pass")),
            ("/analyses/1/c2", Expect::Str("fail")),
            ("/analyses/2/hypothesis-ii", Expect::Bool(false)),
        ],
    },
    Demo {
        name: "s3-z",
        verdict: "formation fail at C2",
        summary: "S3 on Z: H^2 = Z/2 is too small for a formation",
        json: r#"{
  "name": "s3-z",
  "group": {"symmetric": 3},
  "coefficients": {"module": {"module": {"trivial": 0}}},
  "analyses": ["tate", "formation"]
}"#,
        expect: &[
            ("/analyses/1/verdict", Expect::Str("fail")),
            ("/analyses/1/c2", Expect::Str("fail")),
        ],
    },
    Demo {
        name: "hilbert90-f4",
        verdict: "H^1 = 0",
        summary: "Gal(F4/F2) on F4*: H^1 vanishes",
        json: r#"{
  "name": "hilbert90-f4",
  "group": {"cyclic": 2},
  "coefficients": {"module": {"module": {"finite-field-units": {"p": 2, "f": 1, "n": 2}}}},
  "analyses": ["tate"]
}"#,
        expect: &[
            ("/analyses/0/degrees/3/group", Expect::Str("0")),
            ("/analyses/0/herbrand/quotient-one", Expect::Bool(true)),
        ],
    },
    Demo {
        name: "hilbert90-f9",
        verdict: "H^1 = 0",
        summary: "Gal(F9/F3) on F9*: H^1 vanishes",
        json: r#"{
  "name": "hilbert90-f9",
  "group": {"cyclic": 2},
  "coefficients": {"module": {"module": {"finite-field-units": {"p": 3, "f": 1, "n": 2}}}},
  "analyses": ["tate"]
}"#,
        expect: &[
            ("/analyses/0/degrees/3/group", Expect::Str("0")),
            ("/analyses/0/herbrand/quotient-one", Expect::Bool(true)),
        ],
    },
    Demo {
        name: "hilbert90-f8",
        verdict: "H^1 = 0",
        summary: "Gal(F8/F2) on F8*: H^1 vanishes",
        json: r#"{
  "name": "hilbert90-f8",
  "group": {"cyclic": 3},
  "coefficients": {"module": {"module": {"finite-field-units": {"p": 2, "f": 1, "n": 3}}}},
  "analyses": ["tate"]
}"#,
        expect: &[("/analyses/0/degrees/3/group", Expect::Str("0"))],
    },
    Demo {
        name: "regular-s3",
        verdict: "all Tate groups vanish",
        summary: "S3 on Z[S3]: cohomologically trivial, every Tate group vanishes",
        json: r#"{
  "name": "regular-s3",
  "group": {"symmetric": 3},
  "coefficients": {"module": {"module": "regular"}},
  "analyses": ["tate", "resolution"]
}"#,
        expect: &[
            ("/analyses/0/d-squared-zero", Expect::Bool(true)),
            ("/analyses/0/degrees/0/group", Expect::Str("0")),
            ("/analyses/0/degrees/2/group", Expect::Str("0")),
            ("/analyses/0/degrees/4/group", Expect::Str("0")),
            ("/analyses/1/all-pass", Expect::Bool(true)),
        ],
    },
    Demo {
        name: "z-hat-1-analogue",
        verdict: "formation fail at C2 (C1 holds)",
        summary: "Z/2 on F4* placed in degree 1: H^1 = 0 but H^2 is not Z/2",
        json: r#"{
  "name": "z-hat-1-analogue",
  "group": {"cyclic": 2},
  "coefficients": {"tensor-power-shift": {"base": {"finite-field-units": {"p": 2, "f": 1, "n": 2}}, "n": 1}},
  "analyses": ["tate", "formation"]
}"#,
        expect: &[
            ("/analyses/1/verdict", Expect::Str("fail")),
            ("/analyses/1/c1", Expect::Str("pass")),
            ("/analyses/1/c2", Expect::Str("fail")),
        ],
    },
    Demo {
        name: "cone-z2",
        verdict: "long exact sequence consistent for m = 2, 3, 4",
        summary: "Z/2 on Z: the cone of multiplication by m fits the long exact sequence",
        json: r#"{
  "name": "cone-z2",
  "group": {"cyclic": 2},
  "coefficients": {"module": {"module": {"trivial": 0}}},
  "analyses": [{"cone-les": {"m": [2, 3, 4]}}]
}"#,
        expect: &[
            ("/analyses/0/runs/0/all-pass", Expect::Bool(true)),
            ("/analyses/0/runs/1/all-pass", Expect::Bool(true)),
            ("/analyses/0/runs/2/all-pass", Expect::Bool(true)),
        ],
    },
];
