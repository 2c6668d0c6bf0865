use crate::perm::Perm4;
use crate::tri::Triangulation;

/// A canonical, relabeling-invariant key for the combinatorial isomorphism
/// class of a triangulation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
pub struct CensusSignature {
    pub sig: String,
}

impl std::fmt::Display for CensusSignature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.sig)
    }
}

const TOKEN_BOUNDARY: u8 = 255;
const TOKEN_NEW: u8 = 254;

/// Encode the gluing table in breadth-first discovery order starting from
/// `(start, relabel)`. Newly discovered tetrahedra are relabeled so their
/// entry gluing becomes the identity, which makes the encoding a function of
/// the isomorphism class and the starting choice alone.
fn encode_from(tri: &Triangulation, component: &[usize], start: usize, relabel: Perm4) -> Vec<u8> {
    let n = tri.tet_count();
    let mut index_of: Vec<Option<usize>> = vec![None; n];
    let mut order: Vec<usize> = Vec::with_capacity(component.len());
    let mut vertex_map: Vec<Perm4> = vec![Perm4::IDENTITY; n];

    index_of[start] = Some(0);
    order.push(start);
    vertex_map[start] = relabel;

    let mut claimed = vec![[false; 4]; n];
    let mut out: Vec<u8> = Vec::with_capacity(component.len() * 6 + 1);
    out.push(component.len() as u8);

    let mut u = 0;
    while u < order.len() {
        let t = order[u];
        for g_new in 0..4u8 {
            if claimed[t][g_new as usize] {
                continue;
            }
            let f_old = vertex_map[t].inverse().apply(g_new);
            claimed[t][g_new as usize] = true;
            match tri.gluing(t, f_old) {
                None => out.push(TOKEN_BOUNDARY),
                Some(g) => {
                    match index_of[g.tet] {
                        None => {
                            // discover: relabel so the gluing becomes the identity
                            index_of[g.tet] = Some(order.len());
                            order.push(g.tet);
                            vertex_map[g.tet] = vertex_map[t].compose(&g.perm.inverse());
                            claimed[g.tet][g_new as usize] = true;
                            out.push(TOKEN_NEW);
                        }
                        Some(v) => {
                            let phat =
                                vertex_map[g.tet].compose(&g.perm).compose(&vertex_map[t].inverse());
                            claimed[g.tet][phat.apply(g_new) as usize] = true;
                            out.push(v as u8);
                            out.push(phat.index());
                        }
                    }
                }
            }
        }
        u += 1;
    }
    out
}

fn component_of(tri: &Triangulation, start: usize) -> Vec<usize> {
    let n = tri.tet_count();
    let mut seen = vec![false; n];
    let mut stack = vec![start];
    seen[start] = true;
    let mut comp = vec![start];
    while let Some(t) = stack.pop() {
        for f in 0..4u8 {
            if let Some(g) = tri.gluing(t, f) {
                if !seen[g.tet] {
                    seen[g.tet] = true;
                    comp.push(g.tet);
                    stack.push(g.tet);
                }
            }
        }
    }
    comp.sort_unstable();
    comp
}

fn canonical_bytes_component(tri: &Triangulation, component: &[usize]) -> Vec<u8> {
    let mut best: Option<Vec<u8>> = None;
    for &start in component {
        for relabel in Perm4::all() {
            let candidate = encode_from(tri, component, start, relabel);
            if best.as_ref().is_none_or(|b| candidate < *b) {
                best = Some(candidate);
            }
        }
    }
    best.unwrap()
}

fn render(bytes: &[u8]) -> String {
    let mut s = String::new();
    let mut it = bytes.iter();
    let n = it.next().copied().unwrap_or(0);
    s.push_str(&format!("{n}|"));
    while let Some(&b) = it.next() {
        match b {
            TOKEN_BOUNDARY => s.push('b'),
            TOKEN_NEW => s.push('n'),
            v => {
                let p = *it.next().expect("join token carries a permutation");
                s.push_str(&format!("j{v}p{p}."));
            }
        }
    }
    s
}

/// Canonical signature: the minimum breadth-first encoding over all
/// (starting tetrahedron, starting relabeling) choices. Disconnected
/// triangulations get the sorted join of their component signatures.
pub fn canonical_signature(tri: &Triangulation) -> CensusSignature {
    let n = tri.tet_count();
    if n == 0 {
        return CensusSignature { sig: "0|".into() };
    }
    let mut remaining: Vec<bool> = vec![true; n];
    let mut parts: Vec<String> = Vec::new();
    for t in 0..n {
        if !remaining[t] {
            continue;
        }
        let comp = component_of(tri, t);
        for &c in &comp {
            remaining[c] = false;
        }
        parts.push(render(&canonical_bytes_component(tri, &comp)));
    }
    parts.sort();
    CensusSignature { sig: parts.join("/") }
}

/// Reconstruct a triangulation from the canonical encoding of a connected
/// component. Used to turn census signatures back into concrete instances.
pub fn triangulation_from_signature(sig: &CensusSignature) -> Option<Triangulation> {
    if sig.sig.contains('/') {
        return None; // disconnected signatures are not reconstructed
    }
    let (n_str, rest) = sig.sig.split_once('|')?;
    let n: usize = n_str.parse().ok()?;
    let mut tri = Triangulation::new(n);
    let mut tokens: Vec<(usize, u8, Token)> = Vec::new();

    #[derive(Clone, Copy)]
    enum Token {
        Boundary,
        New,
        Join(usize, u8),
    }

    let mut chars = rest.chars().peekable();
    let mut discovered = 1usize;
    let mut cursor: Vec<(usize, u8)> = Vec::new();
    {
        // precompute the face visit order lazily: faces are visited in
        // (tet discovery index, face) order
        for u in 0..n {
            for f in 0..4u8 {
                cursor.push((u, f));
            }
        }
    }
    let mut claimed = vec![[false; 4]; n];
    let mut pos = 0usize;
    while let Some(&ch) = chars.peek() {
        // find next unclaimed cursor slot
        while pos < cursor.len() && claimed[cursor[pos].0][cursor[pos].1 as usize] {
            pos += 1;
        }
        if pos >= cursor.len() {
            return None;
        }
        let (u, f) = cursor[pos];
        claimed[u][f as usize] = true;
        match ch {
            'b' => {
                chars.next();
                tokens.push((u, f, Token::Boundary));
            }
            'n' => {
                chars.next();
                if discovered >= n {
                    return None;
                }
                tri.glue(u, f, discovered, f, Perm4::IDENTITY).ok()?;
                claimed[discovered][f as usize] = true;
                discovered += 1;
                tokens.push((u, f, Token::New));
            }
            'j' => {
                chars.next();
                let mut v_str = String::new();
                while chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                    v_str.push(chars.next().unwrap());
                }
                if chars.next() != Some('p') {
                    return None;
                }
                let mut p_str = String::new();
                while chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                    p_str.push(chars.next().unwrap());
                }
                if chars.next() != Some('.') {
                    return None;
                }
                let v: usize = v_str.parse().ok()?;
                let p: u8 = p_str.parse().ok()?;
                let perm = Perm4::from_index(p);
                tri.glue(u, f, v, perm.apply(f), perm).ok()?;
                claimed[v][perm.apply(f) as usize] = true;
                tokens.push((u, f, Token::Join(v, p)));
            }
            _ => return None,
        }
    }
    let _ = tokens;
    if discovered != n {
        return None;
    }
    Some(tri)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tri::one_tet_solid_torus;

    #[test]
    fn signature_deterministic() {
        let tri = one_tet_solid_torus();
        assert_eq!(canonical_signature(&tri), canonical_signature(&tri));
    }

    #[test]
    fn signature_invariant_under_relabeling() {
        let tri = one_tet_solid_torus();
        let base = canonical_signature(&tri);
        for p in Perm4::all() {
            let relabeled = tri.relabel(&[0], &[p]);
            assert_eq!(canonical_signature(&relabeled), base);
        }
    }

    #[test]
    fn signature_round_trip() {
        let tri = one_tet_solid_torus();
        let sig = canonical_signature(&tri);
        let back = triangulation_from_signature(&sig).unwrap();
        assert_eq!(canonical_signature(&back), sig);
    }
}
