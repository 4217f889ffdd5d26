// Not every test binary uses every helper.
#![allow(dead_code)]

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use stabmat::PreferenceInstance;

/// Random bipartite preference instance with sides of size `1..=max_side`
/// and at most 24 edges (so the brute-force oracle always applies).
pub fn random_instance(rng: &mut ChaCha8Rng, max_side: usize) -> PreferenceInstance {
    loop {
        let ni = rng.gen_range(1..=max_side);
        let nj = rng.gen_range(1..=max_side);
        let mut pairs = Vec::new();
        for i in 0..ni {
            for j in 0..nj {
                if rng.gen_bool(0.6) {
                    pairs.push((i, j));
                }
            }
        }
        if pairs.len() > 24 {
            continue;
        }
        return build_instance(rng, ni, nj, &pairs);
    }
}

/// Complete bipartite instance with `n` vertices per side and uniformly
/// random preference orders.
pub fn dense_instance(rng: &mut ChaCha8Rng, n: usize) -> PreferenceInstance {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .collect();
    build_instance(rng, n, n, &pairs)
}

fn build_instance(
    rng: &mut ChaCha8Rng,
    ni: usize,
    nj: usize,
    pairs: &[(usize, usize)],
) -> PreferenceInstance {
    let mut text = String::new();
    text.push_str("side I");
    for i in 0..ni {
        text.push_str(&format!(" m{i}"));
    }
    text.push_str("\nside J");
    for j in 0..nj {
        text.push_str(&format!(" w{j}"));
    }
    text.push('\n');
    let mut at_i: Vec<Vec<String>> = vec![Vec::new(); ni];
    let mut at_j: Vec<Vec<String>> = vec![Vec::new(); nj];
    for &(i, j) in pairs {
        let id = format!("e{i}_{j}");
        text.push_str(&format!("edge {id} m{i} w{j}\n"));
        at_i[i].push(id.clone());
        at_j[j].push(id);
    }
    for (i, edges) in at_i.iter_mut().enumerate() {
        if edges.is_empty() {
            continue;
        }
        edges.shuffle(rng);
        text.push_str(&format!("pref m{i} {}\n", edges.join(" ")));
    }
    for (j, edges) in at_j.iter_mut().enumerate() {
        if edges.is_empty() {
            continue;
        }
        edges.shuffle(rng);
        text.push_str(&format!("pref w{j} {}\n", edges.join(" ")));
    }
    PreferenceInstance::parse(&text).expect("generated instance is valid")
}
