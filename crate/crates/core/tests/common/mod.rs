//! Reference implementations used to check the library: a skeleton built
//! directly from the gluing file, full enumeration of every coloring with
//! weights computed from scratch at 512 bits, and homology by dense linear
//! algebra.
#![allow(dead_code)]

use std::path::PathBuf;

use rug::float::Constant;
use rug::Float;

pub const ORACLE_BITS: u32 = 512;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

pub fn data(name: &str) -> String {
    std::fs::read_to_string(data_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Every bundled triangulation: file name, integral H1 as (free rank, torsion).
pub const BUNDLED: &[(&str, usize, &[u64])] = &[
    ("s3_1tet.json", 0, &[]),
    ("s2xs1_2tet.json", 1, &[]),
    ("rp3_2tet.json", 0, &[2]),
    ("lens_3_1_3tet.json", 0, &[3]),
    ("lens_13_5_3tet.json", 0, &[13]),
    ("graph_z3_5tet.json", 0, &[3]),
];

#[derive(Clone, Copy)]
struct Glue {
    tet: usize,
    face: usize,
    perm: [usize; 4],
}

fn parse_raw(text: &str) -> Vec<[Glue; 4]> {
    let doc: serde_json::Value = serde_json::from_str(text).unwrap();
    doc["gluings"]
        .as_array()
        .unwrap()
        .iter()
        .map(|tet| {
            let faces: Vec<Glue> = tet
                .as_array()
                .unwrap()
                .iter()
                .map(|g| {
                    let perm: Vec<usize> = g["perm"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap() as usize).collect();
                    Glue {
                        tet: g["tet"].as_u64().unwrap() as usize,
                        face: g["face"].as_u64().unwrap() as usize,
                        perm: [perm[0], perm[1], perm[2], perm[3]],
                    }
                })
                .collect();
            [faces[0], faces[1], faces[2], faces[3]]
        })
        .collect()
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut x = x;
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

/// Skeleton with oriented edges. Directed edge `(t, i, j)` is node
/// `16 t + 4 i + j` (`i != j`); `edge_of` gives its class and a sign.
pub struct RawSkeleton {
    pub tetrahedra: usize,
    pub vertices: usize,
    pub edges: usize,
    /// `(class, sign)` of the directed edge `i -> j` in tetrahedron `t`.
    edge_of: Vec<(usize, i64)>,
    vertex_of: Vec<usize>,
    /// One `(tet, face)` per triangle.
    pub triangles: Vec<(usize, usize)>,
}

impl RawSkeleton {
    pub fn new(text: &str) -> Self {
        let gl = parse_raw(text);
        let n = gl.len();
        let mut corners = Dsu::new(4 * n);
        let mut directed = Dsu::new(16 * n);
        let node = |t: usize, i: usize, j: usize| 16 * t + 4 * i + j;
        let mut triangles = Vec::new();
        for t in 0..n {
            for f in 0..4 {
                let g = gl[t][f];
                assert_eq!(gl[g.tet][g.face].tet, t);
                if (t, f) <= (g.tet, g.face) {
                    triangles.push((t, f));
                }
                for i in (0..4).filter(|&i| i != f) {
                    corners.union(4 * t + i, 4 * g.tet + g.perm[i]);
                    for j in (0..4).filter(|&j| j != f && j != i) {
                        directed.union(node(t, i, j), node(g.tet, g.perm[i], g.perm[j]));
                    }
                }
            }
        }
        let mut vertex_ids = std::collections::BTreeMap::new();
        let vertex_of: Vec<usize> = (0..4 * n)
            .map(|c| {
                let root = corners.find(c);
                let next = vertex_ids.len();
                *vertex_ids.entry(root).or_insert(next)
            })
            .collect();
        let mut edge_ids = std::collections::BTreeMap::new();
        let mut edge_of = vec![(usize::MAX, 0); 16 * n];
        for t in 0..n {
            for i in 0..4 {
                for j in i + 1..4 {
                    let fwd = directed.find(node(t, i, j));
                    let back = directed.find(node(t, j, i));
                    assert_ne!(fwd, back, "edge reversed onto itself");
                    let key = fwd.min(back);
                    let next = edge_ids.len();
                    let id = *edge_ids.entry(key).or_insert(next);
                    let sign = if fwd == key { 1 } else { -1 };
                    edge_of[node(t, i, j)] = (id, sign);
                    edge_of[node(t, j, i)] = (id, -sign);
                }
            }
        }
        RawSkeleton { tetrahedra: n, vertices: vertex_ids.len(), edges: edge_ids.len(), edge_of, vertex_of, triangles }
    }

    fn edge(&self, t: usize, i: usize, j: usize) -> (usize, i64) {
        self.edge_of[16 * t + 4 * i + j]
    }

    fn corners_of(&self, (_, f): (usize, usize)) -> [usize; 3] {
        let v: Vec<usize> = (0..4).filter(|&i| i != f).collect();
        [v[0], v[1], v[2]]
    }

    /// Edge classes of a triangle's sides.
    pub fn triangle_edges(&self, tri: (usize, usize)) -> [usize; 3] {
        let [a, b, c] = self.corners_of(tri);
        [self.edge(tri.0, a, b).0, self.edge(tri.0, b, c).0, self.edge(tri.0, a, c).0]
    }

    /// Tetrahedron edges as `(a, b, c, d, e, f)` = `(01, 02, 12, 23, 13, 03)`.
    pub fn racah_edges(&self, t: usize) -> [usize; 6] {
        [(0, 1), (0, 2), (1, 2), (2, 3), (1, 3), (0, 3)].map(|(i, j)| self.edge(t, i, j).0)
    }

    /// Integer boundary matrices: `d1` is edges x vertices, `d2` triangles x edges.
    pub fn boundaries(&self) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
        let mut d1 = vec![vec![0; self.vertices]; self.edges];
        for t in 0..self.tetrahedra {
            for i in 0..4 {
                for j in i + 1..4 {
                    let (e, s) = self.edge(t, i, j);
                    let (tail, head) = (self.vertex_of[4 * t + i], self.vertex_of[4 * t + j]);
                    let mut row = vec![0; self.vertices];
                    row[head] += s;
                    row[tail] -= s;
                    d1[e] = row;
                }
            }
        }
        let d2 = self
            .triangles
            .iter()
            .map(|&tri| {
                let [a, b, c] = self.corners_of(tri);
                let mut row = vec![0; self.edges];
                for (i, j, s) in [(a, b, 1), (b, c, 1), (a, c, -1)] {
                    let (e, es) = self.edge(tri.0, i, j);
                    row[e] += s * es;
                }
                row
            })
            .collect();
        (d1, d2)
    }
}

/// Diagonal of the Smith normal form (nonzero entries only).
pub fn smith_diagonal(mut m: Vec<Vec<i64>>) -> Vec<u64> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut k = 0;
    while k < rows.min(cols) {
        // smallest nonzero entry in the remaining block as pivot
        let Some((pr, pc)) = (k..rows)
            .flat_map(|r| (k..cols).map(move |c| (r, c)))
            .filter(|&(r, c)| m[r][c] != 0)
            .min_by_key(|&(r, c)| m[r][c].abs())
        else {
            break;
        };
        m.swap(k, pr);
        for row in m.iter_mut() {
            row.swap(k, pc);
        }
        let mut clean = true;
        for r in k + 1..rows {
            let q = m[r][k] / m[k][k];
            for c in k..cols {
                m[r][c] -= q * m[k][c];
            }
            clean &= m[r][k] == 0;
        }
        for c in k + 1..cols {
            let q = m[k][c] / m[k][k];
            for r in k..rows {
                m[r][c] -= q * m[r][k];
            }
            clean &= m[k][c] == 0;
        }
        if !clean {
            continue;
        }
        // the pivot must divide the rest of the block
        if let Some(r) = (k + 1..rows).find(|&r| (k + 1..cols).any(|c| m[r][c] % m[k][k] != 0)) {
            for c in k..cols {
                m[k][c] += m[r][c];
            }
            continue;
        }
        diag.push(m[k][k].unsigned_abs());
        k += 1;
    }
    diag
}

/// Integral first homology as (free rank, torsion coefficients > 1).
pub fn integral_h1(sk: &RawSkeleton) -> (usize, Vec<u64>) {
    let (d1, d2) = sk.boundaries();
    let rank1 = smith_diagonal(d1).len();
    let diag2 = smith_diagonal(d2);
    let free = sk.edges - rank1 - diag2.len();
    (free, diag2.into_iter().filter(|&d| d > 1).collect())
}

/// Rank of `H1(M; Z/2)` by reducing the same boundary matrices mod 2.
pub fn h1_z2_rank(sk: &RawSkeleton) -> usize {
    fn rank_mod2(m: Vec<Vec<i64>>) -> usize {
        let mut m: Vec<Vec<u8>> = m.into_iter().map(|r| r.into_iter().map(|x| x.rem_euclid(2) as u8).collect()).collect();
        let cols = m.first().map_or(0, Vec::len);
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..m.len()).find(|&r| m[r][c] == 1) else { continue };
            m.swap(rank, p);
            for r in 0..m.len() {
                if r != rank && m[r][c] == 1 {
                    for j in 0..cols {
                        m[r][j] ^= m[rank][j];
                    }
                }
            }
            rank += 1;
        }
        rank
    }
    let (d1, d2) = sk.boundaries();
    sk.edges - rank_mod2(d1) - rank_mod2(d2)
}

/// Quantum arithmetic at one order, computed without any caching tricks.
pub struct Quantum {
    r: u32,
    fact: Vec<Float>,
}

impl Quantum {
    pub fn new(r: u32) -> Self {
        let angle = |n: u32| {
            let mut x = Float::with_val(ORACLE_BITS, Constant::Pi);
            x *= 2 * n;
            x /= r;
            x.sin()
        };
        let base = angle(1);
        let mut fact = vec![Float::with_val(ORACLE_BITS, 1)];
        for n in 1..r {
            let q = angle(n) / &base;
            let next = Float::with_val(ORACLE_BITS, fact.last().unwrap() * q);
            fact.push(next);
        }
        Quantum { r, fact }
    }

    fn q(&self, n: u32) -> Float {
        if n == 0 {
            return Float::with_val(ORACLE_BITS, 0);
        }
        Float::with_val(ORACLE_BITS, &self.fact[n as usize] / &self.fact[n as usize - 1])
    }

    pub fn admissible(&self, a: u32, b: u32, c: u32) -> bool {
        (a + b + c) % 2 == 0 && a <= b + c && b <= a + c && c <= a + b && a + b + c <= 2 * (self.r - 2)
    }

    pub fn eta2(&self) -> Float {
        let mut s = Float::with_val(ORACLE_BITS, Constant::Pi);
        s *= 2;
        s /= self.r;
        let s = s.sin();
        Float::with_val(ORACLE_BITS, &s * &s) * 2u32 / self.r
    }

    fn edge(&self, a: u32) -> Float {
        let w = self.q(a + 1);
        if a % 2 == 1 {
            -w
        } else {
            w
        }
    }

    fn triangle(&self, a: u32, b: u32, c: u32) -> Float {
        let s = (a + b + c) / 2;
        let num = Float::with_val(ORACLE_BITS, &self.fact[(s - a) as usize] * &self.fact[(s - b) as usize]) * &self.fact[(s - c) as usize];
        let w = num / &self.fact[(s + 1) as usize];
        if s % 2 == 1 {
            -w
        } else {
            w
        }
    }

    /// Quantum 6j symbol from the Racah formula, including vanishing terms.
    fn tet(&self, [a, b, c, d, e, f]: [u32; 6]) -> Float {
        let t = [(a + b + c) / 2, (a + e + f) / 2, (d + b + f) / 2, (d + e + c) / 2];
        let q = [(a + b + d + e) / 2, (a + c + d + f) / 2, (b + c + e + f) / 2];
        let mut sum = Float::with_val(ORACLE_BITS, 0);
        for z in *t.iter().max().unwrap()..=*q.iter().min().unwrap() {
            if z + 1 >= self.r {
                continue;
            }
            let mut den = Float::with_val(ORACLE_BITS, 1);
            for &ti in &t {
                den *= &self.fact[(z - ti) as usize];
            }
            for &qj in &q {
                den *= &self.fact[(qj - z) as usize];
            }
            let term = Float::with_val(ORACLE_BITS, &self.fact[(z + 1) as usize] / den);
            if z % 2 == 1 {
                sum -= term;
            } else {
                sum += term;
            }
        }
        sum
    }
}

/// `TV_r` and the number of admissible colorings, from all `(r-1)^e`
/// colorings of the edges.
pub fn naive_tv(sk: &RawSkeleton, r: u32) -> (Float, u64) {
    let qa = Quantum::new(r);
    let tri_edges: Vec<[usize; 3]> = sk.triangles.iter().map(|&t| sk.triangle_edges(t)).collect();
    let tets: Vec<[usize; 6]> = (0..sk.tetrahedra).map(|t| sk.racah_edges(t)).collect();
    let mut colors = vec![0u32; sk.edges];
    let mut total = Float::with_val(ORACLE_BITS, 0);
    let mut count = 0;
    loop {
        if tri_edges.iter().all(|t| qa.admissible(colors[t[0]], colors[t[1]], colors[t[2]])) {
            count += 1;
            let mut w = Float::with_val(ORACLE_BITS, 1);
            for &c in &colors {
                w *= qa.edge(c);
            }
            for t in &tri_edges {
                w *= qa.triangle(colors[t[0]], colors[t[1]], colors[t[2]]);
            }
            for t in &tets {
                w *= qa.tet(t.map(|e| colors[e]));
            }
            total += w;
        }
        // odometer over 0..=r-2
        let Some(i) = colors.iter().position(|&c| c < r - 2) else { break };
        colors[i] += 1;
        colors[..i].iter_mut().for_each(|c| *c = 0);
    }
    for _ in 0..sk.vertices {
        total *= qa.eta2();
    }
    (total, count)
}

/// `|x - y| / max(|y|, floor)`.
pub fn rel_diff(x: &Float, y: &Float, floor: f64) -> f64 {
    let diff = Float::with_val(ORACLE_BITS, x - y).abs().to_f64();
    diff / y.to_f64().abs().max(floor)
}
