//! Regular triangulation of lifted planar points: the projection of the lower convex hull of
//! `(x_i, u_i)`. Incremental insertion with exact orientation predicates. Coplanar ties are
//! broken first by an infinitesimal paraboloid added to the lifts (so points on a flat face stay
//! vertices, Delaunay-style), then by lowering each lift by an infinitesimal that decreases with
//! the point id.

use robust::{incircle, orient2d, orient3d, Coord, Coord3D};

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy)]
struct Tri {
    v: [u32; 3],
    nb: [u32; 3],
    alive: bool,
}

/// Lower-hull triangulation. Vertex ids `0..n` are the input points; three far super
/// vertices follow.
#[derive(Debug, Clone)]
pub struct RegularTriangulation {
    pts: Vec<[f64; 3]>,
    n: usize,
    tris: Vec<Tri>,
    free: Vec<u32>,
    last: u32,
    rng: u64,
    hidden: Vec<bool>,
}

fn c2(p: &[f64; 3]) -> Coord<f64> {
    Coord { x: p[0], y: p[1] }
}

fn c3(p: &[f64; 3]) -> Coord3D<f64> {
    Coord3D { x: p[0], y: p[1], z: p[2] }
}

impl RegularTriangulation {
    /// Triangulate `points` lifted by `lifts`; points not on the lower hull end up hidden.
    pub fn new(points: &[[f64; 2]], lifts: &[f64]) -> Self {
        Self::with_order(points, lifts, &(0..points.len()).collect::<Vec<_>>())
    }

    /// Insert only the listed points, in the given order.
    pub fn with_order(points: &[[f64; 2]], lifts: &[f64], order: &[usize]) -> Self {
        let n = points.len();
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in points {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        if n == 0 {
            lo = [0.0; 2];
            hi = [1.0; 2];
        }
        let c = [(lo[0] + hi[0]) / 2.0, (lo[1] + hi[1]) / 2.0];
        let r = ((hi[0] - lo[0]).max(hi[1] - lo[1])).max(1e-12) * 1e3;
        let top = 1e30;
        let mut pts: Vec<[f64; 3]> = points.iter().zip(lifts).map(|(p, z)| [p[0], p[1], *z]).collect();
        pts.push([c[0] - 2.0 * r, c[1] - r, top]);
        pts.push([c[0] + 2.0 * r, c[1] - r, top]);
        pts.push([c[0], c[1] + 2.0 * r, top]);
        let s = n as u32;
        let mut t = RegularTriangulation {
            pts,
            n,
            tris: vec![Tri { v: [s, s + 1, s + 2], nb: [NONE; 3], alive: true }],
            free: Vec::new(),
            last: 0,
            rng: 0x9E37_79B9_7F4A_7C15,
            hidden: vec![true; n],
        };
        for &i in order {
            t.insert(i as u32);
        }
        t
    }

    fn next_rand(&mut self) -> u64 {
        let mut x = self.rng;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.rng = x;
        x
    }

    /// Sign of orient3d on perturbed lifts; positive iff `d` is strictly below the plane
    /// through the counter-clockwise triangle `a, b, c`.
    fn below(&self, a: u32, b: u32, c: u32, d: u32) -> bool {
        let (pa, pb, pc, pd) =
            (&self.pts[a as usize], &self.pts[b as usize], &self.pts[c as usize], &self.pts[d as usize]);
        let o = orient3d(c3(pa), c3(pb), c3(pc), c3(pd));
        if o != 0.0 {
            return o > 0.0;
        }
        let ic = incircle(c2(pa), c2(pb), c2(pc), c2(pd));
        if ic != 0.0 {
            return ic > 0.0;
        }
        // Lifts are lowered by eps_k with eps_0 >> eps_1 >> ...; the sign is that of
        // −∂O/∂z_k for the smallest id with a nonzero cofactor.
        let mut terms = [
            (a, orient2d(c2(pb), c2(pc), c2(pd))),
            (b, orient2d(c2(pc), c2(pa), c2(pd))),
            (c, orient2d(c2(pa), c2(pb), c2(pd))),
            (d, -orient2d(c2(pa), c2(pb), c2(pc))),
        ];
        terms.sort_by_key(|t| t.0);
        for (_, cof) in terms {
            if cof != 0.0 {
                return -cof > 0.0;
            }
        }
        false
    }

    fn alloc(&mut self, t: Tri) -> u32 {
        if let Some(i) = self.free.pop() {
            self.tris[i as usize] = t;
            i
        } else {
            self.tris.push(t);
            (self.tris.len() - 1) as u32
        }
    }

    /// Triangle whose closed projection contains point `p`.
    fn locate(&mut self, p: u32) -> u32 {
        let mut t = self.last;
        if !self.tris[t as usize].alive {
            t = self.tris.iter().position(|x| x.alive).expect("a live triangle") as u32;
        }
        let q = c2(&self.pts[p as usize]);
        let mut steps = 0usize;
        'walk: loop {
            steps += 1;
            if steps > 4 * self.tris.len() + 100 {
                // Fall back to a scan; the walk should never cycle with exact predicates.
                for (i, tri) in self.tris.iter().enumerate() {
                    if tri.alive && self.contains_point(tri, q) {
                        return i as u32;
                    }
                }
                return t;
            }
            let tri = self.tris[t as usize];
            let start = (self.next_rand() % 3) as usize;
            for k in 0..3 {
                let e = (start + k) % 3;
                let a = &self.pts[tri.v[(e + 1) % 3] as usize];
                let b = &self.pts[tri.v[(e + 2) % 3] as usize];
                if orient2d(c2(a), c2(b), q) < 0.0 && tri.nb[e] != NONE {
                    t = tri.nb[e];
                    continue 'walk;
                }
            }
            return t;
        }
    }

    fn contains_point(&self, tri: &Tri, q: Coord<f64>) -> bool {
        (0..3).all(|e| {
            let a = &self.pts[tri.v[(e + 1) % 3] as usize];
            let b = &self.pts[tri.v[(e + 2) % 3] as usize];
            orient2d(c2(a), c2(b), q) >= 0.0
        })
    }

    fn insert(&mut self, p: u32) {
        let t0 = self.locate(p);
        let tri = self.tris[t0 as usize];
        if !self.below(tri.v[0], tri.v[1], tri.v[2], p) {
            return;
        }
        // Conflict region: connected set of triangles whose plane lies above p.
        let mut cavity = vec![t0];
        let mut in_cav = std::collections::HashSet::new();
        in_cav.insert(t0);
        let mut k = 0;
        while k < cavity.len() {
            let t = cavity[k];
            k += 1;
            for &nb in &self.tris[t as usize].nb {
                if nb == NONE || in_cav.contains(&nb) {
                    continue;
                }
                let v = self.tris[nb as usize].v;
                if self.below(v[0], v[1], v[2], p) {
                    in_cav.insert(nb);
                    cavity.push(nb);
                }
            }
        }
        // Horizon edges (a, b) with the outside neighbour.
        let mut horizon = Vec::new();
        for &t in &cavity {
            let tri = self.tris[t as usize];
            for e in 0..3 {
                let nb = tri.nb[e];
                if nb == NONE || !in_cav.contains(&nb) {
                    horizon.push((tri.v[(e + 1) % 3], tri.v[(e + 2) % 3], nb));
                }
            }
        }
        let mut touched: Vec<u32> = Vec::new();
        for &t in &cavity {
            for &v in &self.tris[t as usize].v {
                touched.push(v);
            }
            self.tris[t as usize].alive = false;
            self.free.push(t);
        }
        let mut by_start = std::collections::HashMap::with_capacity(horizon.len());
        let mut by_end = std::collections::HashMap::with_capacity(horizon.len());
        let mut created = Vec::with_capacity(horizon.len());
        for &(a, b, out) in &horizon {
            let id = self.alloc(Tri { v: [a, b, p], nb: [NONE, NONE, out], alive: true });
            if out != NONE {
                let o = &mut self.tris[out as usize];
                for e in 0..3 {
                    let (x, y) = (o.v[(e + 1) % 3], o.v[(e + 2) % 3]);
                    if x == b && y == a {
                        o.nb[e] = id;
                    }
                }
            }
            by_start.insert(a, id);
            by_end.insert(b, id);
            created.push(id);
        }
        for &id in &created {
            let [a, b, _] = self.tris[id as usize].v;
            // Opposite a is edge (b, p): shared with the triangle starting at b.
            self.tris[id as usize].nb[0] = by_start[&b];
            // Opposite b is edge (p, a): shared with the triangle ending at a.
            self.tris[id as usize].nb[1] = by_end[&a];
        }
        self.last = created[0];
        if (p as usize) < self.n {
            self.hidden[p as usize] = false;
        }
        // Vertices swallowed by the cavity are no longer on the hull.
        let on_horizon: std::collections::HashSet<u32> = horizon.iter().map(|h| h.0).collect();
        for v in touched {
            if (v as usize) < self.n && !on_horizon.contains(&v) {
                self.hidden[v as usize] = true;
            }
        }
    }

    pub fn num_points(&self) -> usize {
        self.n
    }

    /// True when the point is not a vertex of the lower hull.
    pub fn is_hidden(&self, i: usize) -> bool {
        self.hidden[i]
    }

    /// Triangles with only input vertices, counter-clockwise.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let n = self.n as u32;
        self.tris
            .iter()
            .filter(|t| t.alive && t.v.iter().all(|&v| v < n))
            .map(|t| [t.v[0] as usize, t.v[1] as usize, t.v[2] as usize])
            .collect()
    }

    /// Live triangles with neighbour indices into the same list (`None` across the hull).
    pub fn mesh(&self) -> TriMesh {
        let n = self.n as u32;
        let mut index = vec![u32::MAX; self.tris.len()];
        let mut tris = Vec::new();
        for (i, t) in self.tris.iter().enumerate() {
            if t.alive && t.v.iter().all(|&v| v < n) {
                index[i] = tris.len() as u32;
                tris.push(i);
            }
        }
        let verts = tris
            .iter()
            .map(|&i| {
                let v = self.tris[i].v;
                [v[0] as usize, v[1] as usize, v[2] as usize]
            })
            .collect();
        let nbs = tris
            .iter()
            .map(|&i| {
                let nb = self.tris[i].nb;
                let f = |k: u32| {
                    if k == NONE || index[k as usize] == u32::MAX {
                        None
                    } else {
                        Some(index[k as usize] as usize)
                    }
                };
                [f(nb[0]), f(nb[1]), f(nb[2])]
            })
            .collect();
        TriMesh { verts, nbs }
    }
}

/// Triangles of the input points with adjacency; `nbs[t][k]` is across from vertex `k`.
#[derive(Debug, Clone)]
pub struct TriMesh {
    pub verts: Vec<[usize; 3]>,
    pub nbs: Vec<[Option<usize>; 3]>,
}

impl TriMesh {
    /// Plane gradient of each triangle for nodal values `u`.
    pub fn gradients(&self, pts: &[[f64; 2]], u: &[f64]) -> Vec<[f64; 2]> {
        self.verts
            .iter()
            .map(|&[a, b, c]| {
                let (pa, pb, pc) = (pts[a], pts[b], pts[c]);
                let (e1, e2) = ([pb[0] - pa[0], pb[1] - pa[1]], [pc[0] - pa[0], pc[1] - pa[1]]);
                let (d1, d2) = (u[b] - u[a], u[c] - u[a]);
                let det = e1[0] * e2[1] - e1[1] * e2[0];
                [(d1 * e2[1] - d2 * e1[1]) / det, (e1[0] * d2 - e2[0] * d1) / det]
            })
            .collect()
    }

    /// Locate `q` by scanning; returns the triangle and barycentric weights.
    pub fn locate(&self, pts: &[[f64; 2]], q: [f64; 2]) -> Option<(usize, [f64; 3])> {
        let mut best: Option<(usize, [f64; 3], f64)> = None;
        for (t, &[a, b, c]) in self.verts.iter().enumerate() {
            let (pa, pb, pc) = (pts[a], pts[b], pts[c]);
            let det = (pb[0] - pa[0]) * (pc[1] - pa[1]) - (pb[1] - pa[1]) * (pc[0] - pa[0]);
            let l1 = ((pb[0] - q[0]) * (pc[1] - q[1]) - (pb[1] - q[1]) * (pc[0] - q[0])) / det;
            let l2 = ((pc[0] - q[0]) * (pa[1] - q[1]) - (pc[1] - q[1]) * (pa[0] - q[0])) / det;
            let l3 = 1.0 - l1 - l2;
            let m = l1.min(l2).min(l3);
            if best.as_ref().map_or(true, |b| m > b.2) {
                best = Some((t, [l1, l2, l3], m));
            }
        }
        best.filter(|b| b.2 > -1e-9).map(|b| (b.0, b.1))
    }
}
