//! Per-example tables: which stored names play which role, and every outcome
//! asserted for them.

use std::fmt;

/// Coefficient of one term of a stored differential form.
#[derive(Debug, Clone, PartialEq)]
pub enum Coef {
    Def(&'static str),
    Int(i64),
}

/// One wedge factor: the differential of a ring variable or of a scalar
/// definition.
#[derive(Debug, Clone, PartialEq)]
pub enum Factor {
    D(&'static str),
    Df(&'static str),
}

/// `Σ coef · factor_1 ∧ … ∧ factor_p` over the ring of the definition `ring`.
#[derive(Debug, Clone, PartialEq)]
pub struct FormSpec {
    pub ring: &'static str,
    pub terms: Vec<(Coef, Vec<Factor>)>,
}

impl fmt::Display for FormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (c, fs)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match c {
                Coef::Def(n) => write!(f, "{n}")?,
                Coef::Int(n) => write!(f, "{n}")?,
            }
            for (j, x) in fs.iter().enumerate() {
                let sep = if j == 0 { " " } else { "^" };
                match x {
                    Factor::D(v) => write!(f, "{sep}d{v}")?,
                    Factor::Df(v) => write!(f, "{sep}d({v})")?,
                }
            }
        }
        Ok(())
    }
}

fn form(ring: &'static str, terms: Vec<(Coef, Vec<Factor>)>) -> FormSpec {
    FormSpec { ring, terms }
}

fn dvars(names: &[&'static str]) -> Vec<Factor> {
    names.iter().map(|n| Factor::D(n)).collect()
}

/// A reduced map seen on the ambient space: the level parameters become
/// extra coordinates, and `proj` lists the reduced coordinates followed by
/// the level functions. With `via`, `proj` is written over the image of that
/// projection rather than over the ambient space.
#[derive(Debug, Clone, PartialEq)]
pub struct Lift {
    pub proj: &'static str,
    pub levels: &'static [&'static str],
    pub via: Option<&'static str>,
}

fn lift(proj: &'static str, levels: &'static [&'static str], via: Option<&'static str>) -> Lift {
    Lift { proj, levels, via }
}

/// One asserted outcome. Names refer to definitions in the example's data
/// file.
#[derive(Debug, Clone, PartialEq)]
pub enum Expect {
    /// A pair `(lhs, rhs)` of invariants of the symmetry field with `lhs ≡ rhs`.
    Gamma { pair: &'static str },
    /// `field·∇f ≡ 0` for each `f`.
    FieldInvariants { field: &'static str, fns: &'static [&'static str] },
    Invariant { map: &'static str, fns: &'static [&'static str] },
    Involution { map: &'static str },
    /// `map_i ≡ outer_i ∘ inner` for every component, where `inner` maps
    /// into the ring of `outer`.
    Composition { map: &'static str, outer: &'static str, inner: &'static str },
    Volume { map: &'static str, sigma: &'static str, sign: i32 },
    /// `det J(map) ≡ det`.
    Jacobian { map: &'static str, det: &'static str },
    Pushforward { map: &'static str, field: &'static str, sign: i32 },
    Divergence { field: &'static str, sigma: &'static str },
    /// `det J(pi) ≡ det ∘ pi`.
    ProjectionJacobian { pi: &'static str, det: &'static str },
    /// `J(pi)·field ≡ image ∘ pi`.
    Related { field: &'static str, image: &'static str, pi: &'static str },
    /// `inverse ∘ map ≡ id` and `map ∘ inverse ≡ id` between the rings of
    /// the two tuples.
    Inverse { map: &'static str, inverse: &'static str },
    /// `f ∘ pi ≡ g`.
    Pullback { f: &'static str, pi: &'static str, g: &'static str },
    /// A pair `(lhs, rhs)` with `lhs ≡ rhs`.
    Identity { pair: &'static str },
    /// Successive contractions of `top` by each field reproduce each form.
    Contraction { top: FormSpec, steps: Vec<(&'static str, FormSpec)> },
    FormEq { lhs: FormSpec, rhs: FormSpec },
    FormPullback { form: FormSpec, map: &'static str, expected: FormSpec },
    /// `pi ∘ phi ≡ psi ∘ pi` with all three stored.
    Square { phi: &'static str, psi: &'static str, pi: &'static str },
    /// The same square for a reduced map at symbolic levels.
    LiftedSquare { phi: &'static str, psi: &'static str, lift: Lift },
    /// The reduced invariant, read at symbolic levels, pulls back to `ambient`.
    LiftedInvariant { h: &'static str, lift: Lift, ambient: &'static str },
    /// Setting `var = level` in the map `psi` gives `reduced`.
    Restriction { psi: &'static str, reduced: &'static str, var: &'static str, level: &'static str },
    /// Component `var` of `map` is `α·var^sign` with `α` free of `var`.
    Fiber { map: &'static str, var: &'static str, sign: i32 },
    ReducedInvariant { map: &'static str, h: &'static str },
    /// `map` preserves `du∧dv/omega`.
    Symplectic { map: &'static str, omega: &'static str },
    /// `map` equals the QRT map of `h` (horizontal switch first), or its
    /// inverse.
    Qrt { h: &'static str, u: &'static str, v: &'static str, map: &'static str, inverse: bool },
    Distinct { f: &'static str, g: &'static str },
    Commute { f: &'static str, g: &'static str },
    /// A symmetry field of the invariants: `field·∇f ≡ 0` for each `f`.
    Symmetry { field: &'static str, fns: &'static [&'static str] },
    LieBracket { a: &'static str, b: &'static str },
    /// The basis solved for with `free` as free coordinates annihilates
    /// `fns`, commutes pairwise, and spans each field in `recover`.
    SymmetryBasis { fns: &'static [&'static str], free: &'static [&'static str], recover: &'static [&'static str] },
}

pub const STAGES: [&str; 12] = [
    "gamma",
    "invariance",
    "volume",
    "pushforward",
    "divergence",
    "coordinates",
    "squares",
    "fiber",
    "reduced-invariance",
    "symplectic",
    "qrt",
    "symmetry",
];

impl Expect {
    /// Index into [`STAGES`].
    pub fn stage(&self) -> usize {
        use Expect::*;
        match self {
            Gamma { .. } | FieldInvariants { .. } => 0,
            Invariant { .. } | Involution { .. } | Composition { .. } => 1,
            Volume { .. } | Jacobian { .. } => 2,
            Pushforward { .. } => 3,
            Divergence { .. } => 4,
            ProjectionJacobian { .. }
            | Inverse { .. }
            | Related { .. }
            | Pullback { .. }
            | Identity { .. }
            | Contraction { .. }
            | FormEq { .. }
            | FormPullback { .. } => 5,
            Square { .. } | LiftedSquare { .. } | LiftedInvariant { .. } | Restriction { .. } => 6,
            Fiber { .. } => 7,
            ReducedInvariant { .. } => 8,
            Symplectic { .. } => 9,
            Qrt { .. } | Distinct { .. } | Commute { .. } => 10,
            Symmetry { .. } | LieBracket { .. } | SymmetryBasis { .. } => 11,
        }
    }

    /// True when the check depends on symbolic level parameters.
    pub fn needs_symbolic_levels(&self) -> bool {
        matches!(self, Expect::LiftedSquare { .. } | Expect::LiftedInvariant { .. })
    }

    /// Short human-readable description.
    pub fn target(&self) -> String {
        use Expect::*;
        let via = |l: &Lift| match l.via {
            Some(v) => format!("{}∘{}", l.proj, v),
            None => l.proj.to_string(),
        };
        match self {
            Gamma { pair } => format!("{pair}: lhs ≡ rhs"),
            FieldInvariants { field, fns } => format!("{field}·∇ annihilates {}", fns.join(", ")),
            Invariant { map, fns } => format!("{map} preserves {}", fns.join(", ")),
            Involution { map } => format!("{map}∘{map} ≡ id"),
            Composition { map, outer, inner } => format!("{map} ≡ {outer}∘{inner}"),
            Inverse { map, inverse } => format!("{inverse} ≡ {map}⁻¹"),
            Volume { map, sigma, sign } => format!("det J({map})·{sigma}/({sigma}∘{map}) ≡ {sign}"),
            Jacobian { map, det } => format!("det J({map}) ≡ {det}"),
            Pushforward { map, field, sign } => format!("{map}_*({field}) ≡ {sign}·{field}∘{map}"),
            Divergence { field, sigma } => format!("div({field}/{sigma}) ≡ 0"),
            ProjectionJacobian { pi, det } => format!("det J({pi}) ≡ {det}∘{pi}"),
            Related { field, image, pi } => format!("{pi}_*({field}) ≡ {image}∘{pi}"),
            Pullback { f, pi, g } => format!("{f}∘{pi} ≡ {g}"),
            Identity { pair } => format!("{pair}: lhs ≡ rhs"),
            Contraction { top, steps } => {
                let mut s = format!("[{top}]");
                for (x, f) in steps {
                    s.push_str(&format!(" -{x}⌟-> [{f}]"));
                }
                s
            }
            FormEq { lhs, rhs } => format!("{lhs} ≡ {rhs}"),
            FormPullback { form, map, expected } => format!("{map}^*({form}) ≡ {expected}"),
            Square { phi, psi, pi } => format!("{pi}∘{phi} ≡ {psi}∘{pi}"),
            LiftedSquare { phi, psi, lift } => format!("({})∘{phi} ≡ {psi}∘({})", via(lift), via(lift)),
            LiftedInvariant { h, lift, ambient } => format!("{h}∘({}) ≡ {ambient}", via(lift)),
            Restriction { psi, reduced, var, level } => format!("{psi}|{var}={level} ≡ {reduced}"),
            Fiber { map, var, sign } => format!("{map}[{var}] = α·{var}^{sign}"),
            ReducedInvariant { map, h } => format!("{map} preserves {h}"),
            Symplectic { map, omega } => format!("{map} preserves du∧dv/{omega}"),
            Qrt { h, map, inverse, .. } => {
                if *inverse {
                    format!("qrt({h})⁻¹ ≡ {map}")
                } else {
                    format!("qrt({h}) ≡ {map}")
                }
            }
            Distinct { f, g } => format!("{f} ≢ {g}"),
            Commute { f, g } => format!("{f}∘{g} ≡ {g}∘{f}"),
            Symmetry { field, fns } => format!("{field}·∇ annihilates {}", fns.join(", ")),
            LieBracket { a, b } => format!("[{a}, {b}] ≡ 0"),
            SymmetryBasis { fns, free, recover } => format!(
                "basis for {} over {} spans {}",
                fns.join(", "),
                free.join(", "),
                recover.join(", ")
            ),
        }
    }
}

/// Planar data of an example's reduction.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedSpec {
    pub h: &'static str,
    pub u: &'static str,
    pub v: &'static str,
    /// Denominator of the invariant symplectic form `du∧dv/omega`.
    pub omega: &'static str,
    pub maps: &'static [&'static str],
    pub levels: &'static [&'static str],
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExampleSpec {
    pub name: &'static str,
    pub summary: &'static str,
    pub ambient_dim: usize,
    pub source: &'static str,
    pub invariants: &'static [&'static str],
    pub maps: &'static [&'static str],
    pub fields: &'static [&'static str],
    pub sigma: Option<&'static str>,
    pub reduced: ReducedSpec,
    pub expected: Vec<Expect>,
}

const MCM4D: &str = include_str!("data/mcm4d.expr");
const ALT_GAMMA: &str = include_str!("data/mcm4d-alt-gamma.expr");
const ALT_H2: &str = include_str!("data/mcm4d-alt-h2.expr");
const AY: &str = include_str!("data/adler-yamilov.expr");
const YB38: &str = include_str!("data/yb38.expr");
const MCM6D: &str = include_str!("data/mcm6d.expr");

pub const NAMES: [&str; 6] = ["mcm4d", "mcm4d-alt-gamma", "mcm4d-alt-h2", "adler-yamilov", "yb38", "mcm6d"];

pub fn spec(name: &str) -> Option<ExampleSpec> {
    Some(match name {
        "mcm4d" => mcm4d(),
        "mcm4d-alt-gamma" => alt_gamma(),
        "mcm4d-alt-h2" => alt_h2(),
        "adler-yamilov" => adler_yamilov(),
        "yb38" => yb38(),
        "mcm6d" => mcm6d(),
        _ => return None,
    })
}

const K: &[&str] = &["k"];

fn mcm4d() -> ExampleSpec {
    use Expect::*;
    let uv = &["u1", "v1", "u2", "v2"];
    ExampleSpec {
        name: "mcm4d",
        summary: "coupled 4d McMillan map; reduces on u2 = k to the QRT map of its biquadratic invariant",
        ambient_dim: 4,
        source: MCM4D,
        invariants: &["h1", "h2"],
        maps: &["phi", "phi_hat", "iota_xy", "rho_x"],
        fields: &["X", "X_hat"],
        sigma: Some("sigma"),
        reduced: ReducedSpec {
            h: "h",
            u: "u1",
            v: "v1",
            omega: "omega_den",
            maps: &["phi_red", "phi_hat_red"],
            levels: K,
        },
        expected: vec![
            Gamma { pair: "gamma_rel" },
            Gamma { pair: "gamma_rel_hat" },
            FieldInvariants { field: "X", fns: &["g1", "g2", "g3", "g4", "h1", "h2"] },
            FieldInvariants { field: "X_hat", fns: &["g1", "g2", "gh3", "gh4", "h1_hat", "h2"] },
            Invariant { map: "phi", fns: &["h1", "h2"] },
            Invariant { map: "phi_hat", fns: &["h1_hat", "h2"] },
            Invariant { map: "iota_xy", fns: &["h1", "h2"] },
            Invariant { map: "rho_x", fns: &["h1", "h2"] },
            Involution { map: "iota_xy" },
            Involution { map: "rho_x" },
            Composition { map: "phi", outer: "iota_xy", inner: "rho_x" },
            Volume { map: "phi", sigma: "sigma", sign: -1 },
            Volume { map: "phi_hat", sigma: "sigma", sign: -1 },
            Pushforward { map: "phi", field: "X", sign: -1 },
            Pushforward { map: "phi_hat", field: "X_hat", sign: -1 },
            Divergence { field: "X", sigma: "sigma" },
            Divergence { field: "X_hat", sigma: "sigma" },
            ProjectionJacobian { pi: "pi", det: "jac_pi" },
            Pullback { f: "sigma_uv", pi: "pi", g: "sigma" },
            Related { field: "X", image: "X_uv", pi: "pi" },
            Contraction {
                top: form("Omega4", vec![(Coef::Def("Omega4"), dvars(uv))]),
                steps: vec![("X_uv", form("Omega3", vec![(Coef::Def("Omega3"), dvars(&["u1", "v1", "u2"]))]))],
            },
            Square { phi: "phi", psi: "psi", pi: "pi" },
            LiftedSquare { phi: "phi", psi: "phi_red", lift: lift("pi_red", K, Some("pi")) },
            LiftedSquare { phi: "phi_hat", psi: "phi_hat_red", lift: lift("pi_hat_k", K, None) },
            LiftedInvariant { h: "h", lift: lift("pi_red", K, Some("pi")), ambient: "h1" },
            LiftedInvariant { h: "h", lift: lift("pi_hat_k", K, None), ambient: "h1_hat" },
            Restriction { psi: "psi", reduced: "phi_red", var: "u2", level: "k" },
            Fiber { map: "psi", var: "v2", sign: -1 },
            ReducedInvariant { map: "phi_red", h: "h" },
            ReducedInvariant { map: "phi_hat_red", h: "h" },
            Symplectic { map: "phi_red", omega: "omega_den" },
            Symplectic { map: "phi_hat_red", omega: "omega_den" },
            Qrt { h: "h", u: "u1", v: "v1", map: "phi_red", inverse: false },
            Commute { f: "phi_red", g: "phi_hat_red" },
            SymmetryBasis { fns: &["h1", "h2"], free: &["x1", "x2"], recover: &["X"] },
            SymmetryBasis { fns: &["h1_hat", "h2"], free: &["x1", "x2"], recover: &["X_hat"] },
        ],
    }
}

fn alt_gamma() -> ExampleSpec {
    use Expect::*;
    ExampleSpec {
        name: "mcm4d-alt-gamma",
        summary: "4d McMillan invariants built from the rescaled invariants x2/y1, y2/x1; two reduced maps and a distinct QRT map Q, pairwise commuting",
        ambient_dim: 4,
        source: ALT_GAMMA,
        invariants: &["h1", "h2"],
        maps: &["phi1", "phi2"],
        fields: &["X", "X_2"],
        sigma: None,
        reduced: ReducedSpec {
            h: "h",
            u: "u1",
            v: "v1",
            omega: "omega_den",
            maps: &["phi1_red", "phi2_red", "q"],
            levels: K,
        },
        expected: vec![
            Gamma { pair: "gamma_rel" },
            Gamma { pair: "gamma_rel_2" },
            FieldInvariants { field: "X", fns: &["g1", "g2", "g3", "g4", "h1", "h2"] },
            FieldInvariants { field: "X_2", fns: &["g1", "g2", "gb3", "gb4", "h1_2", "h2"] },
            Invariant { map: "phi1", fns: &["h1", "h2"] },
            Invariant { map: "phi2", fns: &["h1_2", "h2"] },
            LiftedSquare { phi: "phi1", psi: "phi1_red", lift: lift("pi1_k", K, None) },
            LiftedSquare { phi: "phi2", psi: "phi2_red", lift: lift("pi2_k", K, None) },
            LiftedInvariant { h: "h", lift: lift("pi1_k", K, None), ambient: "h1" },
            LiftedInvariant { h: "h", lift: lift("pi2_k", K, None), ambient: "h1_2" },
            ReducedInvariant { map: "phi1_red", h: "h" },
            ReducedInvariant { map: "phi2_red", h: "h" },
            ReducedInvariant { map: "q", h: "h" },
            Symplectic { map: "phi1_red", omega: "omega_den" },
            Symplectic { map: "phi2_red", omega: "omega_den" },
            Symplectic { map: "q", omega: "omega_den" },
            Qrt { h: "h", u: "u1", v: "v1", map: "q", inverse: false },
            Distinct { f: "phi1_red", g: "q" },
            Commute { f: "phi1_red", g: "q" },
            Commute { f: "phi1_red", g: "phi2_red" },
            Commute { f: "phi2_red", g: "q" },
            SymmetryBasis { fns: &["h1", "h2"], free: &["x1", "x2"], recover: &["X"] },
            SymmetryBasis { fns: &["h1_2", "h2"], free: &["x1", "x2"], recover: &["X_2"] },
        ],
    }
}

fn alt_h2() -> ExampleSpec {
    use Expect::*;
    ExampleSpec {
        name: "mcm4d-alt-h2",
        summary: "4d McMillan construction with the ratio invariant h2 = x1y1/(x2y2); two commuting reduced maps",
        ambient_dim: 4,
        source: ALT_H2,
        invariants: &["h1", "h2"],
        maps: &["phi1", "phi2"],
        fields: &["X", "X_hat"],
        sigma: None,
        reduced: ReducedSpec {
            h: "h",
            u: "u1",
            v: "v1",
            omega: "omega_den",
            maps: &["phi1_red", "phi2_red"],
            levels: K,
        },
        expected: vec![
            Gamma { pair: "gamma_rel" },
            Gamma { pair: "gamma_rel_hat" },
            FieldInvariants { field: "X", fns: &["g1", "g2", "g3", "g4", "h1", "h2"] },
            FieldInvariants { field: "X_hat", fns: &["g1", "g2", "gh3", "gh4", "h1_hat", "h2"] },
            Invariant { map: "phi1", fns: &["h1", "h2"] },
            Invariant { map: "phi2", fns: &["h1_hat", "h2"] },
            LiftedSquare { phi: "phi1", psi: "phi1_red", lift: lift("pi1_k", K, None) },
            LiftedSquare { phi: "phi2", psi: "phi2_red", lift: lift("pi2_k", K, None) },
            LiftedInvariant { h: "h", lift: lift("pi1_k", K, None), ambient: "h1" },
            LiftedInvariant { h: "h", lift: lift("pi2_k", K, None), ambient: "h1_hat" },
            ReducedInvariant { map: "phi1_red", h: "h" },
            ReducedInvariant { map: "phi2_red", h: "h" },
            Symplectic { map: "phi1_red", omega: "omega_den" },
            Symplectic { map: "phi2_red", omega: "omega_den" },
            Qrt { h: "h", u: "u1", v: "v1", map: "phi1_red", inverse: false },
            Commute { f: "phi1_red", g: "phi2_red" },
            SymmetryBasis { fns: &["h1", "h2"], free: &["x1", "x2"], recover: &["X"] },
            SymmetryBasis { fns: &["h1_hat", "h2"], free: &["x1", "x2"], recover: &["X_hat"] },
        ],
    }
}

fn adler_yamilov() -> ExampleSpec {
    use Expect::*;
    let uv = &["u1", "v1", "u2", "v2"];
    let omega_uv = || {
        form(
            "omega_uv_2",
            vec![
                (Coef::Def("omega_uv_2"), dvars(&["u2", "v2"])),
                (Coef::Def("omega_uv_1"), dvars(&["u1", "v1"])),
            ],
        )
    };
    ExampleSpec {
        name: "adler-yamilov",
        summary: "Adler-Yamilov Yang-Baxter map and its modification by a second symmetry field; symplectic in x-y and u-v coordinates",
        ambient_dim: 4,
        source: AY,
        invariants: &["h1", "h2"],
        maps: &["phi", "phi_hat", "iota_12", "rho"],
        fields: &["X", "X_hat"],
        sigma: Some("sigma"),
        reduced: ReducedSpec {
            h: "h",
            u: "u1",
            v: "v1",
            omega: "omega_den",
            maps: &["phi_red", "phi_hat_red"],
            levels: K,
        },
        expected: vec![
            Gamma { pair: "gamma_rel" },
            Gamma { pair: "gamma_rel_hat" },
            FieldInvariants { field: "X", fns: &["g1", "g2", "g3", "g4", "h1", "h2"] },
            FieldInvariants { field: "X_hat", fns: &["g1", "g2", "gh3", "gh4", "h1", "h2_hat"] },
            Invariant { map: "phi", fns: &["h1", "h2"] },
            Invariant { map: "phi_hat", fns: &["h1", "h2_hat"] },
            Invariant { map: "iota_12", fns: &["h1", "h2"] },
            Invariant { map: "rho", fns: &["h1", "h2"] },
            Involution { map: "iota_12" },
            Involution { map: "rho" },
            Composition { map: "phi", outer: "rho", inner: "iota_12" },
            Volume { map: "phi", sigma: "sigma", sign: 1 },
            Volume { map: "phi_hat", sigma: "sigma", sign: -1 },
            Pushforward { map: "phi", field: "X", sign: 1 },
            Pushforward { map: "phi_hat", field: "X_hat", sign: -1 },
            Divergence { field: "X", sigma: "sigma" },
            Divergence { field: "X_hat", sigma: "sigma" },
            ProjectionJacobian { pi: "pi", det: "jac_pi" },
            ProjectionJacobian { pi: "pi_hat", det: "jac_pi_hat" },
            Pullback { f: "sigma_uv", pi: "pi", g: "sigma" },
            Related { field: "X", image: "X_uv", pi: "pi" },
            Related { field: "X_hat", image: "X_hat_uv", pi: "pi_hat" },
            Contraction {
                top: form("Omega4", vec![(Coef::Def("Omega4"), dvars(uv))]),
                steps: vec![("X_uv", form("Omega3", vec![(Coef::Def("Omega3"), dvars(&["u1", "v1", "u2"]))]))],
            },
            Contraction {
                top: form("Omega4_hat", vec![(Coef::Def("Omega4_hat"), dvars(uv))]),
                steps: vec![(
                    "X_hat_uv",
                    form("Omega3_hat", vec![(Coef::Def("Omega3_hat"), dvars(&["u1", "v1", "u2"]))]),
                )],
            },
            FormPullback {
                form: omega_uv(),
                map: "pi",
                expected: form(
                    "h1",
                    vec![(Coef::Int(1), dvars(&["x1", "x2"])), (Coef::Int(1), dvars(&["y1", "y2"]))],
                ),
            },
            FormPullback { form: omega_uv(), map: "psi", expected: omega_uv() },
            Square { phi: "phi", psi: "psi", pi: "pi" },
            LiftedSquare { phi: "phi", psi: "phi_red", lift: lift("pi_red", K, Some("pi")) },
            LiftedSquare { phi: "phi_hat", psi: "phi_hat_red", lift: lift("pi_red", K, Some("pi_hat")) },
            LiftedInvariant { h: "h", lift: lift("pi_red", K, Some("pi")), ambient: "h2" },
            LiftedInvariant { h: "h", lift: lift("pi_red", K, Some("pi_hat")), ambient: "h2_hat" },
            Restriction { psi: "psi", reduced: "phi_red", var: "u2", level: "k" },
            Fiber { map: "psi", var: "v2", sign: 1 },
            ReducedInvariant { map: "phi_red", h: "h" },
            ReducedInvariant { map: "phi_hat_red", h: "h" },
            Symplectic { map: "phi_red", omega: "omega_den" },
            Symplectic { map: "phi_hat_red", omega: "omega_den" },
            Qrt { h: "h", u: "u1", v: "v1", map: "phi_red", inverse: false },
            Commute { f: "phi_red", g: "phi_hat_red" },
            SymmetryBasis { fns: &["h1", "h2"], free: &["x1", "x2"], recover: &["X"] },
            SymmetryBasis { fns: &["h1", "h2_hat"], free: &["x1", "x2"], recover: &["X_hat"] },
        ],
    }
}

fn yb38() -> ExampleSpec {
    use Expect::*;
    let uv = &["u1", "v1", "u2", "v2"];
    ExampleSpec {
        name: "yb38",
        summary: "Yang-Baxter map with the involution fixed by kappa = (a - x1y2)/(b - x1y2), plus two companions phi_hat and phi_bar",
        ambient_dim: 4,
        source: YB38,
        invariants: &["h1", "h2"],
        maps: &["phi", "phi_hat", "phi_bar", "iota_12", "rho"],
        fields: &["X", "X_hat"],
        sigma: Some("sigma"),
        reduced: ReducedSpec {
            h: "h",
            u: "u1",
            v: "v1",
            omega: "omega_den",
            maps: &["phi_red", "phi_hat_red", "phi_bar_red"],
            levels: K,
        },
        expected: vec![
            Gamma { pair: "gamma_rel" },
            Gamma { pair: "gamma_rel_hat" },
            FieldInvariants { field: "X", fns: &["g1", "g2", "g3", "g4", "h1", "h2"] },
            FieldInvariants { field: "X_hat", fns: &["g1", "g2", "gh3", "gh4", "h1_hat", "h2"] },
            Invariant { map: "phi", fns: &["h1", "h2"] },
            Invariant { map: "phi_hat", fns: &["h1_hat", "h2"] },
            Invariant { map: "phi_bar", fns: &["h1_hat", "h2"] },
            Invariant { map: "iota_12", fns: &["h1", "h2"] },
            Invariant { map: "rho", fns: &["h1", "h2"] },
            Involution { map: "iota_12" },
            Involution { map: "rho" },
            Composition { map: "phi", outer: "iota_12", inner: "rho" },
            Volume { map: "phi", sigma: "sigma", sign: 1 },
            Pushforward { map: "phi", field: "X", sign: 1 },
            Divergence { field: "X", sigma: "sigma" },
            Divergence { field: "X_hat", sigma: "sigma" },
            ProjectionJacobian { pi: "pi", det: "jac_pi" },
            Pullback { f: "sigma_uv", pi: "pi", g: "sigma" },
            Related { field: "X", image: "X_uv", pi: "pi" },
            Contraction {
                top: form("Omega4", vec![(Coef::Def("Omega4"), dvars(uv))]),
                steps: vec![("X_uv", form("Omega3", vec![(Coef::Def("Omega3"), dvars(&["u1", "v1", "u2"]))]))],
            },
            LiftedSquare { phi: "phi", psi: "phi_red", lift: lift("pi_red", K, Some("pi")) },
            LiftedSquare { phi: "phi_hat", psi: "phi_hat_red", lift: lift("pi_hat_k", K, None) },
            LiftedSquare { phi: "phi_bar", psi: "phi_bar_red", lift: lift("pi_hat_k", K, None) },
            LiftedInvariant { h: "h", lift: lift("pi_red", K, Some("pi")), ambient: "h2" },
            LiftedInvariant { h: "h", lift: lift("pi_hat_k", K, None), ambient: "h2" },
            ReducedInvariant { map: "phi_red", h: "h" },
            ReducedInvariant { map: "phi_hat_red", h: "h" },
            ReducedInvariant { map: "phi_bar_red", h: "h" },
            Symplectic { map: "phi_red", omega: "omega_den" },
            Symplectic { map: "phi_hat_red", omega: "omega_den" },
            Symplectic { map: "phi_bar_red", omega: "omega_den" },
            Qrt { h: "h", u: "u1", v: "v1", map: "phi_red", inverse: false },
            Commute { f: "phi_red", g: "phi_hat_red" },
            Commute { f: "phi_red", g: "phi_bar_red" },
            Commute { f: "phi_hat_red", g: "phi_bar_red" },
            Commute { f: "phi_hat", g: "phi_bar" },
            SymmetryBasis { fns: &["h1", "h2"], free: &["x1", "x2"], recover: &["X"] },
            SymmetryBasis { fns: &["h1_hat", "h2"], free: &["x1", "x2"], recover: &["X_hat"] },
        ],
    }
}

fn mcm6d() -> ExampleSpec {
    use Expect::*;
    const LEVELS: &[&str] = &["k1", "k3"];
    let omega4_two_term = || {
        form(
            "Omega4_du1",
            vec![
                (Coef::Def("Omega4_du1"), dvars(&["u1", "u2", "v2", "u3"])),
                (Coef::Def("Omega4_dv1"), dvars(&["v1", "u2", "v2", "u3"])),
            ],
        )
    };
    let omega4_r = || {
        form(
            "Omega4_r",
            vec![(
                Coef::Def("Omega4_r"),
                vec![Factor::Df("r"), Factor::D("u2"), Factor::D("v2"), Factor::D("u3")],
            )],
        )
    };
    let omega4_ruv = || form("Omega4_ruv", vec![(Coef::Def("Omega4_ruv"), dvars(&["r", "u2", "v2", "u3"]))]);
    ExampleSpec {
        name: "mcm6d",
        summary: "coupled 6d McMillan map; two commuting symmetry fields reduce it to a QRT map in the r-s plane",
        ambient_dim: 6,
        source: MCM6D,
        invariants: &["h1", "h2", "h3"],
        maps: &["phi", "phi_hat"],
        fields: &["X", "X1", "S1", "X_hat"],
        sigma: Some("sigma"),
        reduced: ReducedSpec {
            h: "h2_rs",
            u: "r",
            v: "s",
            omega: "omega_den",
            maps: &["phi_red", "phi_hat_red"],
            levels: LEVELS,
        },
        expected: vec![
            Gamma { pair: "gamma_rel_1" },
            Gamma { pair: "gamma_rel_2" },
            Gamma { pair: "gamma_rel_hat" },
            FieldInvariants {
                field: "X",
                fns: &["g1", "g2", "g3", "g4", "g5", "g6", "g7", "h1", "h2", "h3"],
            },
            FieldInvariants {
                field: "X_hat",
                fns: &["g1", "g2", "g3", "g4", "g5", "gh6", "gh7", "h1", "h2_hat", "h3"],
            },
            Invariant { map: "phi", fns: &["h1", "h2", "h3"] },
            Invariant { map: "phi_hat", fns: &["h1", "h2_hat", "h3"] },
            Volume { map: "phi", sigma: "sigma", sign: 1 },
            Jacobian { map: "phi", det: "jac_phi" },
            Volume { map: "phi_hat", sigma: "sigma", sign: 1 },
            Pushforward { map: "phi", field: "X", sign: -1 },
            Pushforward { map: "phi", field: "X1", sign: -1 },
            Divergence { field: "X", sigma: "sigma" },
            Divergence { field: "X1", sigma: "sigma" },
            Divergence { field: "X_hat", sigma: "sigma" },
            ProjectionJacobian { pi: "pi", det: "jac_pi" },
            Pullback { f: "sigma_uv", pi: "pi", g: "sigma" },
            Identity { pair: "Omega6_top" },
            Related { field: "X", image: "X_uv", pi: "pi" },
            Related { field: "X1", image: "X1_uv", pi: "pi" },
            Related { field: "X_hat", image: "X_hat_uv", pi: "pi_hat" },
            Contraction {
                top: form(
                    "Omega6",
                    vec![(Coef::Def("Omega6"), dvars(&["u1", "u2", "v1", "v2", "u3", "v3"]))],
                ),
                steps: vec![
                    ("X_uv", form("Omega5", vec![(Coef::Def("Omega5"), dvars(&["u1", "u2", "v1", "v2", "u3"]))])),
                    ("X1_uv", omega4_two_term()),
                ],
            },
            FormEq { lhs: omega4_two_term(), rhs: omega4_r() },
            FormPullback { form: omega4_ruv(), map: "pi_ruv", expected: omega4_r() },
            FormPullback {
                form: omega4_ruv(),
                map: "nu",
                expected: form("Omega4_rs", vec![(Coef::Def("Omega4_rs"), dvars(&["r", "s", "h1", "u3"]))]),
            },
            Identity { pair: "h1_uv_r" },
            Inverse { map: "nu", inverse: "chart" },
            Composition { map: "pi_rs", outer: "chart", inner: "pi_ruv" },
            Pullback { f: "h1_uv", pi: "pi", g: "h1" },
            Pullback { f: "h2_uv", pi: "pi", g: "h2" },
            LiftedSquare { phi: "phi", psi: "phi_red", lift: lift("pi_rs", LEVELS, Some("pi")) },
            LiftedSquare { phi: "phi_hat", psi: "phi_hat_red", lift: lift("pi_rs", LEVELS, Some("pi_hat")) },
            LiftedInvariant { h: "h2_rs", lift: lift("pi_rs", LEVELS, Some("pi")), ambient: "h2" },
            LiftedInvariant { h: "h2_rs", lift: lift("pi_rs", LEVELS, Some("pi_hat")), ambient: "h2_hat" },
            ReducedInvariant { map: "phi_red", h: "h2_rs" },
            ReducedInvariant { map: "phi_hat_red", h: "h2_rs" },
            Symplectic { map: "phi_red", omega: "omega_den" },
            Symplectic { map: "phi_hat_red", omega: "omega_den" },
            Qrt { h: "h2_rs", u: "r", v: "s", map: "phi_red", inverse: false },
            Commute { f: "phi_red", g: "phi_hat_red" },
            Symmetry { field: "X1", fns: &["h1", "h2", "h3"] },
            Symmetry { field: "S1", fns: &["h1", "h2", "h3"] },
            LieBracket { a: "X", b: "X1" },
            LieBracket { a: "X", b: "S1" },
            SymmetryBasis {
                fns: &["h1", "h2", "h3"],
                free: &["x1", "x2", "x3"],
                recover: &["X", "S1", "X1"],
            },
        ],
    }
}
