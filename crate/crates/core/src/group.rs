//! Finite group data: multiplication tables, validation, and irreducible
//! representations. Characters of abelian groups are generated internally
//! by reducing the relation lattice of a generating set to diagonal form;
//! nonabelian irreps must be supplied by the caller.

use crate::error::{Error, Result};
use num_complex::Complex;
use rand::{Rng, SeedableRng};

type C64 = Complex<f64>;

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    pub labels: Vec<String>,
    table: Vec<Vec<usize>>,
    inverses: Vec<usize>,
    identity: usize,
}

impl FiniteGroup {
    pub fn new(labels: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 || table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidGroup("table shape".into()));
        }
        if table
            .iter()
            .flat_map(|r| r.iter())
            .any(|&x| x >= n)
        {
            return Err(Error::InvalidGroup("table entry out of range".into()));
        }
        // identity: e with e*g = g*e = g for all g
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| Error::InvalidGroup("no identity".into()))?;
        // inverses
        let mut inverses = vec![usize::MAX; n];
        for g in 0..n {
            let inv = (0..n)
                .find(|&h| table[g][h] == identity && table[h][g] == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("no inverse for {g}")))?;
            inverses[g] = inv;
        }
        // associativity: all triples up to order 24, sampled above
        let check = |a: usize, b: usize, c: usize| table[table[a][b]][c] == table[a][table[b][c]];
        if n <= 24 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if !check(a, b, c) {
                            return Err(Error::InvalidGroup(format!(
                                "associativity fails at ({a},{b},{c})"
                            )));
                        }
                    }
                }
            }
        } else {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
            for _ in 0..5000 {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if !check(a, b, c) {
                    return Err(Error::InvalidGroup(format!(
                        "associativity fails at ({a},{b},{c})"
                    )));
                }
            }
        }
        Ok(FiniteGroup {
            labels,
            table,
            inverses,
            identity,
        })
    }

    /// Cyclic group of order n with labels e, g, g^2, ...
    pub fn cyclic(n: usize) -> FiniteGroup {
        let labels = (0..n)
            .map(|k| match k {
                0 => "e".to_string(),
                1 => "g".to_string(),
                k => format!("g^{k}"),
            })
            .collect();
        let table = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        FiniteGroup::new(labels, table).unwrap()
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }
    pub fn identity(&self) -> usize {
        self.identity
    }
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (a..n).all(|b| self.table[a][b] == self.table[b][a]))
    }

    /// Greedy generating set together with a word (exponent vector over the
    /// generators) for every element; valid for abelian groups.
    fn abelian_words(&self) -> (Vec<usize>, Vec<Vec<i64>>, Vec<Vec<i64>>) {
        let n = self.order();
        let mut generators: Vec<usize> = Vec::new();
        let mut words: Vec<Option<Vec<i64>>> = vec![None; n];
        words[self.identity] = Some(Vec::new());
        let mut relations: Vec<Vec<i64>> = Vec::new();
        loop {
            // close under current generators (BFS), collecting relations
            let mut frontier: Vec<usize> = (0..n).filter(|&g| words[g].is_some()).collect();
            while let Some(g) = frontier.pop() {
                let wg = words[g].clone().unwrap();
                for (k, &gen) in generators.iter().enumerate() {
                    let h = self.mul(g, gen);
                    let mut wh = wg.clone();
                    wh.resize(generators.len(), 0);
                    wh[k] += 1;
                    match &words[h] {
                        None => {
                            words[h] = Some(wh);
                            frontier.push(h);
                        }
                        Some(existing) => {
                            let mut existing = existing.clone();
                            existing.resize(generators.len(), 0);
                            let rel: Vec<i64> = wh
                                .iter()
                                .zip(existing.iter())
                                .map(|(a, b)| a - b)
                                .collect();
                            if rel.iter().any(|x| *x != 0) {
                                relations.push(rel);
                            }
                        }
                    }
                }
            }
            match (0..n).find(|&g| words[g].is_none()) {
                None => break,
                Some(g) => {
                    generators.push(g);
                    for w in words.iter_mut().flatten() {
                        w.resize(generators.len(), 0);
                    }
                    // order relation for the new generator
                    let mut ord = 1usize;
                    let mut acc = g;
                    while acc != self.identity {
                        acc = self.mul(acc, g);
                        ord += 1;
                    }
                    let mut rel = vec![0i64; generators.len()];
                    rel[generators.len() - 1] = ord as i64;
                    relations.push(rel);
                }
            }
        }
        for r in relations.iter_mut() {
            r.resize(generators.len(), 0);
        }
        let word_list: Vec<Vec<i64>> = (0..n)
            .map(|g| {
                let mut w = words[g].clone().unwrap();
                w.resize(generators.len(), 0);
                w
            })
            .collect();
        (generators, word_list, relations)
    }

    /// Characters of an abelian group: each is given by an order `n` and an
    /// exponent per element, with value `exp(2 pi i exps[g] / n)`.
    pub fn abelian_characters(&self) -> Result<Vec<(i64, Vec<i64>)>> {
        if !self.is_abelian() {
            return Err(Error::InvalidGroup(
                "characters are generated only for abelian groups".into(),
            ));
        }
        let (generators, words, relations) = self.abelian_words();
        let k = generators.len();
        if k == 0 {
            return Ok(vec![(1, vec![0; self.order()])]);
        }
        // Smith form of the relation matrix (k x m): S = U R V
        let m = relations.len();
        let mut r: Vec<Vec<i64>> = (0..k)
            .map(|i| (0..m).map(|j| relations[j][i]).collect())
            .collect();
        let mut u: Vec<Vec<i64>> = (0..k)
            .map(|i| (0..k).map(|j| i64::from(i == j)).collect())
            .collect();
        smith_rows_tracked(&mut r, &mut u);
        // diagonal entries s_i; group order = prod s_i
        let diag: Vec<i64> = (0..k)
            .map(|i| if i < m { r[i][i].abs() } else { 0 })
            .collect();
        if diag.iter().any(|&s| s == 0) || diag.iter().product::<i64>() != self.order() as i64 {
            return Err(Error::InvalidGroup(format!(
                "relation lattice reduced to {diag:?}, expected covolume {}",
                self.order()
            )));
        }
        let lcm = diag.iter().fold(1i64, |a, &b| num_integer_lcm(a, b));
        // coordinates of each element in the diagonal basis
        let coords: Vec<Vec<i64>> = words
            .iter()
            .map(|w| {
                (0..k)
                    .map(|i| {
                        let v: i64 = (0..k).map(|j| u[i][j] * w[j]).sum();
                        v.rem_euclid(diag[i])
                    })
                    .collect()
            })
            .collect();
        // enumerate character tuples
        let mut tuples: Vec<Vec<i64>> = vec![Vec::new()];
        for &s in &diag {
            let mut next = Vec::new();
            for t in &tuples {
                for c in 0..s {
                    let mut t2 = t.clone();
                    t2.push(c);
                    next.push(t2);
                }
            }
            tuples = next;
        }
        let chars = tuples
            .into_iter()
            .map(|t| {
                let exps: Vec<i64> = coords
                    .iter()
                    .map(|x| {
                        let e: i64 = (0..k).map(|i| t[i] * x[i] * (lcm / diag[i])).sum();
                        e.rem_euclid(lcm)
                    })
                    .collect();
                (lcm, exps)
            })
            .collect();
        Ok(chars)
    }
}

fn num_integer_lcm(a: i64, b: i64) -> i64 {
    if a == 0 || b == 0 {
        return 0;
    }
    (a / gcd_i64(a, b) * b).abs()
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Reduce `r` to diagonal form by integer row and column operations,
/// tracking row operations in `u` (so the output satisfies S = U R V for
/// an untracked V).
fn smith_rows_tracked(r: &mut Vec<Vec<i64>>, u: &mut Vec<Vec<i64>>) {
    let rows = r.len();
    if rows == 0 {
        return;
    }
    let cols = r[0].len();
    let mut t = 0usize;
    while t < rows.min(cols) {
        // find a nonzero pivot in the remaining block
        let mut pivot: Option<(usize, usize)> = None;
        let mut best = i64::MAX;
        for i in t..rows {
            for j in t..cols {
                if r[i][j] != 0 && r[i][j].abs() < best {
                    best = r[i][j].abs();
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        r.swap(t, pi);
        u.swap(t, pi);
        for row in r.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            for i in (t + 1)..rows {
                if r[i][t] != 0 {
                    let q = r[i][t].div_euclid(r[t][t]);
                    for j in 0..cols {
                        r[i][j] -= q * r[t][j];
                    }
                    for j in 0..u[0].len() {
                        let v = u[t][j];
                        u[i][j] -= q * v;
                    }
                    if r[i][t] != 0 {
                        r.swap(t, i);
                        u.swap(t, i);
                        clean = false;
                    }
                }
            }
            for j in (t + 1)..cols {
                if r[t][j] != 0 {
                    let q = r[t][j].div_euclid(r[t][t]);
                    for i in 0..rows {
                        let v = r[i][t];
                        r[i][j] -= q * v;
                    }
                    if r[t][j] != 0 {
                        for row in r.iter_mut() {
                            row.swap(t, j);
                        }
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
        t += 1;
    }
}

/// An irreducible representation: either an internally generated character
/// (value `exp(2 pi i exps[g] / order)`) or user-supplied unitary matrices.
#[derive(Clone, Debug)]
pub enum Irrep {
    Character {
        label: String,
        order: i64,
        exps: Vec<i64>,
    },
    MatrixRep {
        label: String,
        dim: usize,
        mats: Vec<Vec<Vec<C64>>>,
    },
}

impl Irrep {
    pub fn label(&self) -> &str {
        match self {
            Irrep::Character { label, .. } => label,
            Irrep::MatrixRep { label, .. } => label,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Irrep::Character { .. } => 1,
            Irrep::MatrixRep { dim, .. } => *dim,
        }
    }

    pub fn value_c64(&self, g: usize) -> Vec<Vec<C64>> {
        match self {
            Irrep::Character { order, exps, .. } => {
                let angle = 2.0 * std::f64::consts::PI * exps[g] as f64 / *order as f64;
                vec![vec![Complex::from_polar(1.0, angle)]]
            }
            Irrep::MatrixRep { mats, .. } => mats[g].clone(),
        }
    }
}

/// A validated group together with its irreps.
#[derive(Clone, Debug)]
pub struct GroupData {
    pub group: FiniteGroup,
    pub irreps: Vec<Irrep>,
}

const IRREP_TOL: f64 = 1e-12;

impl GroupData {
    /// Abelian groups generate their characters internally; nonabelian
    /// groups must supply a complete set of unitary irreps.
    pub fn new(group: FiniteGroup, user_irreps: Vec<Irrep>) -> Result<Self> {
        let irreps = if group.is_abelian() && user_irreps.is_empty() {
            group
                .abelian_characters()?
                .into_iter()
                .enumerate()
                .map(|(i, (order, exps))| Irrep::Character {
                    label: format!("chi{i}"),
                    order,
                    exps,
                })
                .collect()
        } else {
            user_irreps
        };
        if irreps.is_empty() {
            return Err(Error::InvalidGroup(
                "nonabelian groups require user-supplied irreps".into(),
            ));
        }
        let data = GroupData { group, irreps };
        data.validate()?;
        Ok(data)
    }

    fn validate(&self) -> Result<()> {
        let n = self.group.order();
        let dim_sq: usize = self.irreps.iter().map(|r| r.dim() * r.dim()).sum();
        if dim_sq != n {
            return Err(Error::InvalidGroup(format!(
                "sum of squared irrep dimensions {dim_sq} != group order {n}"
            )));
        }
        for irrep in &self.irreps {
            let m = irrep.dim();
            let id = irrep.value_c64(self.group.identity());
            for (i, row) in id.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    let want = if i == j { 1.0 } else { 0.0 };
                    if (v - Complex::new(want, 0.0)).norm() > IRREP_TOL {
                        return Err(Error::InvalidGroup(format!(
                            "irrep {} does not send identity to identity",
                            irrep.label()
                        )));
                    }
                }
            }
            for a in 0..n {
                // unitarity
                let ma = irrep.value_c64(a);
                for i in 0..m {
                    for j in 0..m {
                        let mut acc = Complex::new(0.0, 0.0);
                        for k in 0..m {
                            acc += ma[i][k] * ma[j][k].conj();
                        }
                        let want = if i == j { 1.0 } else { 0.0 };
                        if (acc - Complex::new(want, 0.0)).norm() > 1e-9 {
                            return Err(Error::InvalidGroup(format!(
                                "irrep {} is not unitary at element {a}",
                                irrep.label()
                            )));
                        }
                    }
                }
                for b in 0..n {
                    let mb = irrep.value_c64(b);
                    let mab = irrep.value_c64(self.group.mul(a, b));
                    for i in 0..m {
                        for j in 0..m {
                            let mut acc = Complex::new(0.0, 0.0);
                            for k in 0..m {
                                acc += ma[i][k] * mb[k][j];
                            }
                            if (acc - mab[i][j]).norm() > IRREP_TOL {
                                return Err(Error::InvalidGroup(format!(
                                    "irrep {} is not a homomorphism at ({a},{b})",
                                    irrep.label()
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_characters() {
        for n in [1usize, 2, 3, 4, 6] {
            let g = FiniteGroup::cyclic(n);
            let data = GroupData::new(g, Vec::new()).unwrap();
            assert_eq!(data.irreps.len(), n);
            // characters are distinct
            for i in 0..n {
                for j in (i + 1)..n {
                    let vi: Vec<_> = (0..n).map(|g| data.irreps[i].value_c64(g)[0][0]).collect();
                    let vj: Vec<_> = (0..n).map(|g| data.irreps[j].value_c64(g)[0][0]).collect();
                    assert!(
                        vi.iter().zip(&vj).any(|(a, b)| (a - b).norm() > 1e-9),
                        "characters {i} and {j} coincide for n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn klein_four_characters() {
        // Z/2 x Z/2 as a table
        let table = vec![
            vec![0, 1, 2, 3],
            vec![1, 0, 3, 2],
            vec![2, 3, 0, 1],
            vec![3, 2, 1, 0],
        ];
        let labels = vec!["e".into(), "a".into(), "b".into(), "ab".into()];
        let g = FiniteGroup::new(labels, table).unwrap();
        let data = GroupData::new(g, Vec::new()).unwrap();
        assert_eq!(data.irreps.len(), 4);
        // all character values are +-1
        for irrep in &data.irreps {
            for g in 0..4 {
                let v = irrep.value_c64(g)[0][0];
                assert!((v.im).abs() < 1e-12 && (v.re.abs() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn bad_tables_rejected() {
        // identity but no inverse for element 1
        let t = vec![vec![0, 1], vec![1, 1]];
        assert!(FiniteGroup::new(vec!["e".into(), "a".into()], t).is_err());
        // wrong shape
        let t = vec![vec![0, 1]];
        assert!(FiniteGroup::new(vec!["a".into(), "b".into()], t).is_err());
        // out of range entry
        let t = vec![vec![0, 1], vec![1, 5]];
        assert!(FiniteGroup::new(vec!["e".into(), "a".into()], t).is_err());
    }

    #[test]
    fn sum_of_squares_enforced() {
        let g = FiniteGroup::cyclic(3);
        let bad = vec![Irrep::Character {
            label: "only".into(),
            order: 3,
            exps: vec![0, 1, 2],
        }];
        assert!(GroupData::new(g, bad).is_err());
    }
}
