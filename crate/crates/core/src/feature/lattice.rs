use std::collections::{BTreeMap, BTreeSet};

use super::FeatureError;

pub const TOP: &str = "top";

/// A partial order of type symbols with a distinguished top.
///
/// The reflexive-transitive closure is computed once at construction; a
/// subsumption query is a table lookup.
#[derive(Debug, Clone)]
pub struct TypeLattice {
    index: BTreeMap<String, usize>,
    names: Vec<String>,
    parents: Vec<BTreeSet<usize>>,
    /// `above[t]` holds every type `s` with `t ⊑ s`, including `t`.
    above: Vec<Vec<bool>>,
}

impl Default for TypeLattice {
    fn default() -> Self {
        TypeLattice::from_edges(std::iter::empty::<(&str, &str)>()).expect("top alone is a lattice")
    }
}

impl TypeLattice {
    /// Builds the lattice from `(subtype, supertype)` edges.
    pub fn from_edges<'a, I>(edges: I) -> Result<Self, FeatureError>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut lattice = TypeLattice {
            index: BTreeMap::new(),
            names: Vec::new(),
            parents: Vec::new(),
            above: Vec::new(),
        };
        lattice.intern(TOP);
        for (sub, sup) in edges {
            let s = lattice.intern(sub);
            let p = lattice.intern(sup);
            lattice.parents[s].insert(p);
        }
        lattice.close()?;
        Ok(lattice)
    }

    /// Parses `type<TAB>supertype` lines.
    pub fn parse(src: &str) -> Result<Self, FeatureError> {
        let mut edges = Vec::new();
        for (n, line) in src.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split('\t').map(str::trim);
            match (parts.next(), parts.next(), parts.next()) {
                (Some(sub), Some(sup), None) if !sub.is_empty() && !sup.is_empty() => {
                    edges.push((sub, sup))
                }
                _ => {
                    return Err(FeatureError::Syntax {
                        line: n + 1,
                        message: "expected `type<TAB>supertype`".into(),
                    })
                }
            }
        }
        Self::from_edges(edges)
    }

    fn intern(&mut self, name: &str) -> usize {
        let name = if name == "*top*" { TOP } else { name };
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len();
        self.index.insert(name.to_string(), i);
        self.names.push(name.to_string());
        self.parents.push(BTreeSet::new());
        i
    }

    fn close(&mut self) -> Result<(), FeatureError> {
        let n = self.names.len();
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut state = vec![0u8; n];
        let mut above: Vec<Vec<bool>> = vec![Vec::new(); n];
        let mut path = Vec::new();
        for t in 0..n {
            self.visit(t, &mut state, &mut above, &mut path)?;
        }
        let top = self.index[TOP];
        if let Some(t) = (0..n).find(|&t| !above[t][top]) {
            return Err(FeatureError::Unrooted(self.names[t].clone()));
        }
        self.above = above;
        Ok(())
    }

    fn visit(
        &self,
        t: usize,
        state: &mut [u8],
        above: &mut [Vec<bool>],
        path: &mut Vec<usize>,
    ) -> Result<(), FeatureError> {
        match state[t] {
            2 => return Ok(()),
            1 => {
                let from = path.iter().position(|&p| p == t).unwrap_or(0);
                let mut cycle: Vec<String> = path[from..].iter().map(|&p| self.names[p].clone()).collect();
                cycle.push(self.names[t].clone());
                return Err(FeatureError::Cycle(cycle));
            }
            _ => {}
        }
        state[t] = 1;
        path.push(t);
        let mut row = vec![false; self.names.len()];
        row[t] = true;
        for &p in &self.parents[t] {
            self.visit(p, state, above, path)?;
            for (k, &b) in above[p].iter().enumerate() {
                row[k] |= b;
            }
        }
        path.pop();
        above[t] = row;
        state[t] = 2;
        Ok(())
    }

    pub fn contains(&self, t: &str) -> bool {
        self.index.contains_key(t)
    }

    fn id(&self, t: &str) -> Result<usize, FeatureError> {
        self.index
            .get(t)
            .copied()
            .ok_or_else(|| FeatureError::UnknownType(t.to_string()))
    }

    /// True iff `specific ⊑ general`.
    pub fn subsumes(&self, general: &str, specific: &str) -> Result<bool, FeatureError> {
        let g = self.id(general)?;
        let s = self.id(specific)?;
        Ok(self.above[s][g])
    }

    pub fn types(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(String::as_str)
    }

    pub fn direct_supertypes(&self, t: &str) -> Result<Vec<&str>, FeatureError> {
        let id = self.id(t)?;
        Ok(self.parents[id].iter().map(|&p| self.names[p].as_str()).collect())
    }
}
