//! Finite discrete groupoids and their nerves.

use std::collections::HashMap;

use super::Violation;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub id: String,
    pub source: usize,
    pub target: usize,
}

/// A finite groupoid given by its full multiplication table.
///
/// `γ·δ` is meant to be defined exactly when `source(γ) = target(δ)`; this
/// and the other axioms are checked by [`FiniteGroupoid::violations`], not
/// by the constructor, so that malformed input can be reported in full.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupoid {
    units: Vec<String>,
    arrows: Vec<Arrow>,
    /// `compose[g * m + h] = g·h`
    compose: Vec<Option<usize>>,
    declared_inverse: Vec<Option<usize>>,
    identity: Vec<Option<usize>>,
    inverse: Vec<Option<usize>>,
}

impl FiniteGroupoid {
    /// Builds a groupoid from named units, arrows, and composition triples
    /// `(g, h, g·h)` given by index. Out-of-range indices are reported as
    /// violations.
    pub fn from_table(
        units: Vec<String>,
        arrows: Vec<Arrow>,
        composition: &[(usize, usize, usize)],
        declared_inverse: Vec<Option<usize>>,
    ) -> Result<Self, Vec<Violation>> {
        let m = arrows.len();
        let mut violations = Vec::new();
        for (k, a) in arrows.iter().enumerate() {
            for (what, u) in [("source", a.source), ("target", a.target)] {
                if u >= units.len() {
                    violations.push(Violation::new(
                        format!("/arrows/{k}/{what}"),
                        "unknown_unit",
                        format!("arrow {} has {what} index {u} out of range", a.id),
                    ));
                }
            }
        }
        let mut compose = vec![None; m * m];
        for (k, &(g, h, gh)) in composition.iter().enumerate() {
            if g >= m || h >= m || gh >= m {
                violations.push(Violation::new(
                    format!("/composition/{k}"),
                    "unknown_arrow",
                    "composition entry refers to an unknown arrow".into(),
                ));
                continue;
            }
            if compose[g * m + h].is_some_and(|prev| prev != gh) {
                violations.push(Violation::new(
                    format!("/composition/{k}"),
                    "conflicting_composition",
                    format!(
                        "{}·{} is given two different values",
                        arrows[g].id, arrows[h].id
                    ),
                ));
                continue;
            }
            compose[g * m + h] = Some(gh);
        }
        if declared_inverse.len() != m {
            violations.push(Violation::new(
                "/inverse".into(),
                "inverse_shape",
                format!("{} inverse entries for {m} arrows", declared_inverse.len()),
            ));
        }
        if !violations.is_empty() {
            return Err(violations);
        }
        let mut g = Self {
            units,
            arrows,
            compose,
            declared_inverse,
            identity: Vec::new(),
            inverse: Vec::new(),
        };
        g.identity = (0..g.units.len()).map(|u| g.find_identity(u)).collect();
        g.inverse = (0..m).map(|a| g.find_inverse(a)).collect();
        Ok(g)
    }

    /// The pair groupoid `X × X` on `n` units.
    pub fn pair(n: usize) -> Self {
        Self::transitive(&GroupTable::cyclic(1), n)
    }

    /// `n` units and identity arrows only.
    pub fn trivial(n: usize) -> Self {
        let units: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let arrows = (0..n)
            .map(|i| Arrow {
                id: format!("1_x{i}"),
                source: i,
                target: i,
            })
            .collect();
        let composition: Vec<_> = (0..n).map(|i| (i, i, i)).collect();
        let inverse = (0..n).map(Some).collect();
        Self::from_table(units, arrows, &composition, inverse).expect("well-formed table")
    }

    /// A group as a one-object groupoid.
    pub fn group(table: &GroupTable) -> Self {
        Self::transitive(table, 1)
    }

    /// The transitive groupoid `H × (pair groupoid on n units)`: arrows
    /// `(i, h, j)` from unit `j` to unit `i`, composed as
    /// `(i, h, j)·(j, h', k) = (i, hh', k)`.
    pub fn transitive(table: &GroupTable, n: usize) -> Self {
        let order = table.order();
        let units: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let index = |i: usize, h: usize, j: usize| (i * order + h) * n + j;
        let mut arrows = Vec::with_capacity(n * n * order);
        for i in 0..n {
            for h in 0..order {
                for j in 0..n {
                    let id = match (n, order) {
                        (_, 1) => format!("{j}>{i}"),
                        (1, _) => table.name(h).to_string(),
                        _ => format!("{}:{j}>{i}", table.name(h)),
                    };
                    arrows.push(Arrow {
                        id,
                        source: j,
                        target: i,
                    });
                }
            }
        }
        let mut composition = Vec::new();
        let mut inverse = Vec::with_capacity(arrows.len());
        for i in 0..n {
            for h in 0..order {
                for j in 0..n {
                    inverse.push(Some(index(j, table.inverse(h), i)));
                    for h2 in 0..order {
                        for k in 0..n {
                            composition.push((
                                index(i, h, j),
                                index(j, h2, k),
                                index(i, table.mul(h, h2), k),
                            ));
                        }
                    }
                }
            }
        }
        Self::from_table(units, arrows, &composition, inverse).expect("well-formed table")
    }

    /// Disjoint union, with units and arrows of later parts renamed by a
    /// `#k` suffix when `parts.len() > 1`.
    pub fn disjoint_union(parts: &[FiniteGroupoid]) -> Self {
        let tag = |name: &str, k: usize| {
            if parts.len() > 1 {
                format!("{name}#{k}")
            } else {
                name.to_string()
            }
        };
        let mut units = Vec::new();
        let mut arrows = Vec::new();
        let mut composition = Vec::new();
        let mut inverse = Vec::new();
        for (k, p) in parts.iter().enumerate() {
            let (u0, a0) = (units.len(), arrows.len());
            units.extend(p.units.iter().map(|u| tag(u, k)));
            arrows.extend(p.arrows.iter().map(|a| Arrow {
                id: tag(&a.id, k),
                source: a.source + u0,
                target: a.target + u0,
            }));
            let m = p.arrows.len();
            for g in 0..m {
                for h in 0..m {
                    if let Some(gh) = p.compose[g * m + h] {
                        composition.push((g + a0, h + a0, gh + a0));
                    }
                }
            }
            inverse.extend(p.declared_inverse.iter().map(|x| x.map(|i| i + a0)));
        }
        Self::from_table(units, arrows, &composition, inverse).expect("well-formed union")
    }

    /// Same groupoid with arrows listed in the order `perm` (new position `k`
    /// holds old arrow `perm[k]`).
    pub fn reorder_arrows(&self, perm: &[usize]) -> Self {
        let m = self.arrows.len();
        assert_eq!(perm.len(), m, "permutation length");
        let mut new_of_old = vec![0; m];
        for (new, &old) in perm.iter().enumerate() {
            new_of_old[old] = new;
        }
        let arrows = perm.iter().map(|&old| self.arrows[old].clone()).collect();
        let mut composition = Vec::new();
        for g in 0..m {
            for h in 0..m {
                if let Some(gh) = self.compose[g * m + h] {
                    composition.push((new_of_old[g], new_of_old[h], new_of_old[gh]));
                }
            }
        }
        let inverse = perm
            .iter()
            .map(|&old| self.declared_inverse[old].map(|i| new_of_old[i]))
            .collect();
        Self::from_table(self.units.clone(), arrows, &composition, inverse).expect("relabeling")
    }

    pub fn units(&self) -> &[String] {
        &self.units
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn unit_count(&self) -> usize {
        self.units.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn source(&self, a: usize) -> usize {
        self.arrows[a].source
    }

    pub fn target(&self, a: usize) -> usize {
        self.arrows[a].target
    }

    pub fn compose(&self, g: usize, h: usize) -> Option<usize> {
        self.compose[g * self.arrows.len() + h]
    }

    pub fn identity(&self, unit: usize) -> Option<usize> {
        self.identity[unit]
    }

    pub fn inverse(&self, a: usize) -> Option<usize> {
        self.inverse[a]
    }

    fn find_identity(&self, u: usize) -> Option<usize> {
        (0..self.arrows.len()).find(|&e| {
            self.arrows[e].source == u
                && self.arrows[e].target == u
                && self.compose(e, e) == Some(e)
        })
    }

    fn find_inverse(&self, a: usize) -> Option<usize> {
        let (s, t) = (self.source(a), self.target(a));
        let (id_s, id_t) = (self.identity[s]?, self.identity[t]?);
        let works = |b: usize| self.compose(a, b) == Some(id_t) && self.compose(b, a) == Some(id_s);
        match self.declared_inverse[a] {
            Some(b) if b < self.arrows.len() && works(b) => Some(b),
            _ => (0..self.arrows.len()).find(|&b| works(b)),
        }
    }

    /// Every violated groupoid axiom, with JSON-pointer style locations.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let m = self.arrows.len();
        let name = |a: usize| self.arrows[a].id.as_str();

        for (u, id) in self.identity.iter().enumerate() {
            if id.is_none() {
                out.push(Violation::new(
                    format!("/units/{u}"),
                    "identity_missing",
                    format!("identity missing for unit {}", self.units[u]),
                ));
            }
        }
        for g in 0..m {
            for h in 0..m {
                let composable = self.source(g) == self.target(h);
                match (composable, self.compose(g, h)) {
                    (true, None) => out.push(Violation::new(
                        "/composition".into(),
                        "composition_missing",
                        format!("composition {}·{} missing", name(g), name(h)),
                    )),
                    (false, Some(_)) => out.push(Violation::new(
                        "/composition".into(),
                        "composition_not_composable",
                        format!(
                            "composition {}·{} given but source({}) != target({})",
                            name(g),
                            name(h),
                            name(g),
                            name(h)
                        ),
                    )),
                    (true, Some(gh)) => {
                        if self.source(gh) != self.source(h) || self.target(gh) != self.target(g) {
                            out.push(Violation::new(
                                "/composition".into(),
                                "composition_endpoints",
                                format!(
                                    "{}·{} = {} has the wrong endpoints",
                                    name(g),
                                    name(h),
                                    name(gh)
                                ),
                            ));
                        }
                    }
                    (false, None) => {}
                }
            }
        }
        if !out.is_empty() {
            // The remaining axioms presuppose a total table with identities.
            return out;
        }

        for g in 0..m {
            let (id_s, id_t) = (
                self.identity[self.source(g)].expect("checked"),
                self.identity[self.target(g)].expect("checked"),
            );
            if self.compose(g, id_s) != Some(g) || self.compose(id_t, g) != Some(g) {
                out.push(Violation::new(
                    format!("/arrows/{g}"),
                    "identity_law",
                    format!("identities do not act trivially on arrow {}", name(g)),
                ));
            }
        }
        'assoc: for g in 0..m {
            for h in 0..m {
                let Some(gh) = self.compose(g, h) else {
                    continue;
                };
                for k in 0..m {
                    let Some(hk) = self.compose(h, k) else {
                        continue;
                    };
                    if self.compose(gh, k) != self.compose(g, hk) {
                        out.push(Violation::new(
                            "/composition".into(),
                            "associativity",
                            format!(
                                "({}·{})·{} != {}·({}·{})",
                                name(g),
                                name(h),
                                name(k),
                                name(g),
                                name(h),
                                name(k)
                            ),
                        ));
                        break 'assoc;
                    }
                }
            }
        }
        for a in 0..m {
            if self.inverse[a].is_none() {
                out.push(Violation::new(
                    format!("/arrows/{a}"),
                    "inverse_missing",
                    format!("inverse missing for arrow {}", name(a)),
                ));
            } else if let Some(b) = self.declared_inverse[a] {
                if self.inverse[a] != Some(b) {
                    out.push(Violation::new(
                        format!("/inverse/{}", name(a)),
                        "inverse_wrong",
                        format!("declared inverse of {} is not an inverse", name(a)),
                    ));
                }
            }
        }
        out
    }

    /// Order of the isotropy group at each unit.
    pub fn isotropy_orders(&self) -> Vec<usize> {
        let mut orders = vec![0; self.units.len()];
        for a in &self.arrows {
            if a.source == a.target {
                orders[a.source] += 1;
            }
        }
        orders
    }

    pub fn is_principal(&self) -> bool {
        self.isotropy_orders().iter().all(|&k| k == 1)
    }

    /// Orbit index of every unit, numbered by first appearance.
    pub fn orbits(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.units.len()).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut y = x;
            while parent[y] != r {
                let next = parent[y];
                parent[y] = r;
                y = next;
            }
            r
        }
        for a in &self.arrows {
            let (x, y) = (find(&mut parent, a.source), find(&mut parent, a.target));
            if x != y {
                parent[x.max(y)] = x.min(y);
            }
        }
        let mut label = HashMap::new();
        (0..self.units.len())
            .map(|u| {
                let root = find(&mut parent, u);
                let next = label.len();
                *label.entry(root).or_insert(next)
            })
            .collect()
    }

    pub fn orbit_count(&self) -> usize {
        self.orbits().into_iter().max().map_or(0, |k| k + 1)
    }
}

/// Multiplication table of a finite group; element 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    names: Vec<String>,
    mul: Vec<usize>,
}

impl GroupTable {
    pub fn new(names: Vec<String>, mul: Vec<usize>) -> Self {
        assert_eq!(mul.len(), names.len() * names.len(), "table size");
        Self { names, mul }
    }

    /// `ℤ/m` with elements named `0..m`; `ℤ/2` uses `e` and `g`.
    pub fn cyclic(m: usize) -> Self {
        assert!(m >= 1, "cyclic group of order 0");
        let names = if m == 2 {
            vec!["e".into(), "g".into()]
        } else {
            (0..m).map(|k| k.to_string()).collect()
        };
        let mul = (0..m * m).map(|k| (k / m + k % m) % m).collect();
        Self { names, mul }
    }

    /// Symmetric group on three letters.
    pub fn symmetric3() -> Self {
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [1, 0, 2],
            [0, 2, 1],
            [2, 1, 0],
            [1, 2, 0],
            [2, 0, 1],
        ];
        let index = |p: [usize; 3]| perms.iter().position(|&q| q == p).expect("closed");
        let mut mul = Vec::with_capacity(36);
        for a in &perms {
            for b in &perms {
                mul.push(index([a[b[0]], a[b[1]], a[b[2]]]));
            }
        }
        let names = ["id", "(01)", "(12)", "(02)", "(012)", "(021)"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        Self { names, mul }
    }

    pub fn product(a: &GroupTable, b: &GroupTable) -> Self {
        let (n, k) = (a.order(), b.order());
        let mut names = Vec::with_capacity(n * k);
        for x in 0..n {
            for y in 0..k {
                names.push(format!("({},{})", a.name(x), b.name(y)));
            }
        }
        let mut mul = Vec::with_capacity(n * k * n * k);
        for x in 0..n * k {
            for y in 0..n * k {
                mul.push(a.mul(x / k, y / k) * k + b.mul(x % k, y % k));
            }
        }
        Self { names, mul }
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mul[x * self.order() + y]
    }

    pub fn inverse(&self, x: usize) -> usize {
        (0..self.order())
            .find(|&y| self.mul(x, y) == 0)
            .expect("group element without inverse")
    }
}

/// One degree of the nerve: the composable tuples `(γ₁, …, γₙ)` with
/// `source(γᵢ) = target(γᵢ₊₁)`, in lexicographic order, and the face maps
/// into the previous degree.
///
/// Degree 0 lists the units as one-element tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NerveLevel {
    pub degree: usize,
    pub simplices: Vec<Vec<usize>>,
    /// `faces[i][k]` is the index of `dᵢ(simplices[k])` one degree down.
    pub faces: Vec<Vec<usize>>,
}

impl NerveLevel {
    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }
}

/// Degrees `0..=max_degree` of the nerve.
pub fn nerve_tower(g: &FiniteGroupoid, max_degree: usize) -> Vec<NerveLevel> {
    let mut levels = vec![NerveLevel {
        degree: 0,
        simplices: (0..g.unit_count()).map(|u| vec![u]).collect(),
        faces: Vec::new(),
    }];
    if max_degree == 0 {
        return levels;
    }

    // d₀ = source, d₁ = target
    let arrows: Vec<Vec<usize>> = (0..g.arrow_count()).map(|a| vec![a]).collect();
    let faces = vec![
        (0..g.arrow_count()).map(|a| g.source(a)).collect(),
        (0..g.arrow_count()).map(|a| g.target(a)).collect(),
    ];
    levels.push(NerveLevel {
        degree: 1,
        simplices: arrows,
        faces,
    });

    let mut by_target: Vec<Vec<usize>> = vec![Vec::new(); g.unit_count()];
    for a in 0..g.arrow_count() {
        by_target[g.target(a)].push(a);
    }

    for n in 2..=max_degree {
        let prev = &levels[n - 1];
        let index: HashMap<&[usize], usize> = prev
            .simplices
            .iter()
            .enumerate()
            .map(|(k, s)| (s.as_slice(), k))
            .collect();
        let mut simplices = Vec::new();
        for s in &prev.simplices {
            let last = *s.last().expect("nonempty tuple");
            for &a in &by_target[g.source(last)] {
                let mut t = s.clone();
                t.push(a);
                simplices.push(t);
            }
        }
        let mut faces = vec![Vec::with_capacity(simplices.len()); n + 1];
        let mut scratch = Vec::with_capacity(n);
        for s in &simplices {
            for (i, face) in faces.iter_mut().enumerate() {
                scratch.clear();
                if i == 0 {
                    scratch.extend_from_slice(&s[1..]);
                } else if i == n {
                    scratch.extend_from_slice(&s[..n - 1]);
                } else {
                    scratch.extend_from_slice(&s[..i - 1]);
                    scratch.push(g.compose(s[i - 1], s[i]).expect("composable tuple"));
                    scratch.extend_from_slice(&s[i + 1..]);
                }
                face.push(index[scratch.as_slice()]);
            }
        }
        levels.push(NerveLevel {
            degree: n,
            simplices,
            faces,
        });
    }
    levels
}

pub fn nerve(g: &FiniteGroupoid, n: usize) -> NerveLevel {
    nerve_tower(g, n).pop().expect("degree 0 always present")
}

/// Number of composable `n`-tuples, without enumerating them.
pub fn nerve_size(g: &FiniteGroupoid, n: usize) -> u128 {
    if n == 0 {
        return g.unit_count() as u128;
    }
    // counts[u] = number of k-tuples whose first arrow has target u
    let mut counts: Vec<u128> = vec![1; g.unit_count()];
    for _ in 0..n {
        let mut next = vec![0u128; g.unit_count()];
        for a in g.arrows() {
            next[a.target] = next[a.target].saturating_add(counts[a.source]);
        }
        counts = next;
    }
    counts.iter().fold(0u128, |acc, &x| acc.saturating_add(x))
}
