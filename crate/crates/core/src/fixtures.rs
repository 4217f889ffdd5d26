//! Small canonical instances used across the test suite and handy for
//! trying out the CLI.

use crate::instance::PreferenceInstance;

/// Five-vertex instance with a unique stable matching `{b, d}` and an
/// uncovered vertex `v`.
pub const G_LEFT: &str = "\
side I 1 2
side J x y v
edge a 2 y
edge b 1 y
edge c 1 x
edge d 2 x
edge e 2 v
pref 1 b c
pref 2 d e a
pref x c d
pref y a b
pref v e
";

/// Eight-vertex extension of [`G_LEFT`] with three stable matchings.
pub const G_RIGHT: &str = "\
side I 1 2 3 4
side J x y v w
edge a 2 y
edge b 1 y
edge c 1 x
edge d 2 x
edge e 2 v
edge a' 3 v
edge b' 3 w
edge c' 4 w
edge d' 4 v
pref 1 b c
pref 2 d e a
pref 3 a' b'
pref 4 c' d'
pref x c d
pref y a b
pref v d' e a'
pref w b' c'
";

/// Complete 2x2 instance with two stable matchings and one rotation.
pub const K22: &str = "\
side I m1 m2
side J w1 w2
edge e11 m1 w1
edge e12 m1 w2
edge e21 m2 w1
edge e22 m2 w2
pref m1 e11 e12
pref m2 e22 e21
pref w1 e21 e11
pref w2 e12 e22
";

pub fn g_left() -> PreferenceInstance {
    PreferenceInstance::parse(G_LEFT).expect("G-left fixture parses")
}

pub fn g_right() -> PreferenceInstance {
    PreferenceInstance::parse(G_RIGHT).expect("G-right fixture parses")
}

pub fn k22() -> PreferenceInstance {
    PreferenceInstance::parse(K22).expect("K22 fixture parses")
}

/// Disjoint union of `k` copies of [`K22`], with ids suffixed `_0`,
/// `_1`, ... Independent rotations multiply the stable matching count,
/// so the union has exactly `2^k` stable matchings.
pub fn k22_copies(k: usize) -> PreferenceInstance {
    let mut side_i = String::new();
    let mut side_j = String::new();
    let mut body = String::new();
    for c in 0..k {
        side_i.push_str(&format!(" m1_{c} m2_{c}"));
        side_j.push_str(&format!(" w1_{c} w2_{c}"));
        body.push_str(&format!(
            "edge e11_{c} m1_{c} w1_{c}\nedge e12_{c} m1_{c} w2_{c}\n\
             edge e21_{c} m2_{c} w1_{c}\nedge e22_{c} m2_{c} w2_{c}\n\
             pref m1_{c} e11_{c} e12_{c}\npref m2_{c} e22_{c} e21_{c}\n\
             pref w1_{c} e21_{c} e11_{c}\npref w2_{c} e12_{c} e22_{c}\n"
        ));
    }
    let text = format!("side I{side_i}\nside J{side_j}\n{body}");
    PreferenceInstance::parse(&text).expect("K22 union fixture parses")
}

/// Disjoint union of [`G_LEFT`] and [`K22`] (ids kept as-is; they do
/// not collide).
pub fn g_left_plus_k22() -> PreferenceInstance {
    let text = "side I 1 2 m1 m2\nside J x y v w1 w2\n\
         edge a 2 y\nedge b 1 y\nedge c 1 x\nedge d 2 x\nedge e 2 v\n\
         edge e11 m1 w1\nedge e12 m1 w2\nedge e21 m2 w1\nedge e22 m2 w2\n\
         pref 1 b c\npref 2 d e a\npref x c d\npref y a b\npref v e\n\
         pref m1 e11 e12\npref m2 e22 e21\npref w1 e21 e11\npref w2 e12 e22\n";
    PreferenceInstance::parse(text).expect("union fixture parses")
}
