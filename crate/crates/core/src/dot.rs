//! Graphviz output: pinwheel dual graphs and the Hasse diagram of the face poset.

use std::fmt::Write as _;

use crate::chains::{enumerate_chains, Chain, ChainError};
use crate::cyclo::RootExponent;
use crate::strata::PinwheelStratum;

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' | '\\' => {
                out.push('\\');
                out.push(ch);
            }
            '\n' => out.push_str("\\n"),
            _ => out.push(ch),
        }
    }
    out.push('"');
    out
}

/// The full `r`-fold dual graph. Vertices are `center` and `c{ℓ}_{j}` for component
/// `C^ℓ_j`; legs are drawn as point-shaped vertices labeled `x+`, `x-`, `y^ℓ`, `z_i^e`.
pub fn stratum_dot(s: &PinwheelStratum) -> String {
    let r = s.r();
    let k = s.k();
    let mut out = String::from("graph stratum {\n  node [shape=circle, label=\"\"];\n");
    let mut leg_id = 0usize;
    let mut leg = |out: &mut String, owner: &str, label: &str| {
        leg_id += 1;
        let _ = writeln!(out, "  leg{leg_id} [shape=plaintext, label={}];", quote(label));
        let _ = writeln!(out, "  {owner} -- leg{leg_id};");
    };
    let _ = writeln!(out, "  center [shape=doublecircle];");
    leg(&mut out, "center", "x+");
    leg(&mut out, "center", "x-");
    for i in s.central_orbits() {
        for e in 0..r {
            leg(&mut out, "center", &format!("z_{i}^{e}"));
        }
    }
    for l in 0..r {
        for j in 1..=k {
            let _ = writeln!(out, "  c{l}_{j};");
        }
        if k == 0 {
            leg(&mut out, "center", &format!("y^{l}"));
            continue;
        }
        leg(&mut out, &format!("c{l}_1"), &format!("y^{l}"));
        for (j, comp) in s.spoke().iter().enumerate() {
            for e in comp {
                let exp = e.exp.add(RootExponent::new(i64::from(l), r), r);
                leg(&mut out, &format!("c{l}_{}", j + 1), &format!("z_{}^{}", e.orbit, exp.value()));
            }
        }
        for j in 1..k {
            let _ = writeln!(out, "  c{l}_{j} -- c{l}_{};", j + 1);
        }
        let _ = writeln!(out, "  c{l}_{k} -- center;");
    }
    out.push_str("}\n");
    out
}

/// Covering pairs `(finer, coarser)` of the refinement order, as indices into `chains`.
pub fn covering_pairs(chains: &[Chain]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, a) in chains.iter().enumerate() {
        for (j, b) in chains.iter().enumerate() {
            if a.len() == b.len() + 1 && a.refines(b) {
                out.push((i, j));
            }
        }
    }
    out
}

/// Hasse diagram of all chains for `(r, n)`: each node is labeled by its chain JSON and
/// edges point from the finer chain (smaller face) to the coarser one.
pub fn hasse_dot(r: u32, n: usize) -> Result<String, ChainError> {
    let chains = enumerate_chains(r, n)?;
    let mut out = String::from("digraph hasse {\n  rankdir=BT;\n  node [shape=box, fontsize=9];\n");
    for (i, c) in chains.iter().enumerate() {
        let json = serde_json::to_string(c).expect("chain serializes");
        let _ = writeln!(out, "  n{i} [label={}];", quote(&json));
    }
    for (a, b) in covering_pairs(&chains) {
        let _ = writeln!(out, "  n{a} -> n{b};");
    }
    out.push_str("}\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strata::chain_to_stratum;

    #[test]
    fn stratum_graph_shape() {
        let c = Chain::from_pairs(3, 4, vec![vec![3], vec![2, 3, 4]], &[(2, 1), (3, 0), (4, 2)]).unwrap();
        let d = stratum_dot(&chain_to_stratum(&c));
        assert!(d.starts_with("graph stratum {"));
        // 3 spokes of 2 components: 3 inner edges and 3 edges to the center
        assert_eq!(d.matches("_1 -- c").count(), 3);
        assert_eq!(d.matches(" -- center;").count(), 3);
        for label in ["\"x+\"", "\"x-\"", "\"y^2\"", "\"z_1^2\"", "\"z_3^1\"", "\"z_4^0\""] {
            assert!(d.contains(label), "{label}");
        }
        // 2 heavy, 3 y, 4·3 light legs
        assert_eq!(d.matches("shape=plaintext").count(), 17);
        assert!(d.is_ascii());
    }

    #[test]
    fn open_stratum_graph() {
        let d = stratum_dot(&chain_to_stratum(&Chain::empty(2, 1).unwrap()));
        assert_eq!(d.matches(" -- leg").count(), 2 + 2 + 2);
        assert!(!d.contains("c0_"));
    }

    #[test]
    fn hasse_octagon() {
        let chains = enumerate_chains(2, 2).unwrap();
        // every vertex lies on two edges, every edge lies in the octagon
        assert_eq!(covering_pairs(&chains).len(), 8 * 2 + 8);
        let d = hasse_dot(2, 2).unwrap();
        assert!(d.contains("rankdir=BT"));
        assert_eq!(d.matches(" -> ").count(), 24);
        assert!(d.contains(r#"label="{\"r\":2,\"n\":2,\"sets\":[],\"decoration\":{}}""#));
    }
}
