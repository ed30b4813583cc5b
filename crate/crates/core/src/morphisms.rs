//! Harmonic morphisms of graphs and the induced maps on class groups,
//! harmonic forms, generalized Jacobians and rigidified Picard groups.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genjac::ModulusContext;
use crate::graph::{Graph, GraphSpec, Modulus};
use crate::jacobian::JacobianContext;
use crate::linalg::{solve_matrix, FgAbGroup, GroupHom, IntMatrix};
use crate::report::CheckReport;
use crate::sheaf::{build_standard_sheaves, rigidified_picard};

/// Image of an edge: another edge, or a vertex when the edge collapses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeImage {
    Edge(usize),
    Vertex(usize),
}

/// JSON form of an edge image: `{"edge": "f"}` or `{"vertex": "u"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeImageSpec {
    Edge(String),
    Vertex(String),
}

/// JSON form of a morphism. The target graph may be embedded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<GraphSpec>,
    pub vertex_map: BTreeMap<String, String>,
    pub edge_map: BTreeMap<String, EdgeImageSpec>,
}

impl MorphismSpec {
    pub fn from_json(text: &str) -> Result<MorphismSpec> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// A morphism `φ = (φ_V, φ_E)` of graphs; collapsed edges map to vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphMorphism {
    source: Graph,
    target: Graph,
    vertex_map: Vec<usize>,
    edge_map: Vec<EdgeImage>,
}

impl GraphMorphism {
    pub fn new(
        source: &Graph,
        target: &Graph,
        vertex_map: Vec<usize>,
        edge_map: Vec<EdgeImage>,
    ) -> Result<Self> {
        if vertex_map.len() != source.vertex_count() || edge_map.len() != source.edge_count() {
            return Err(Error::InvalidMorphism(
                "maps must be total on the source".into(),
            ));
        }
        if let Some(&v) = vertex_map.iter().find(|&&v| v >= target.vertex_count()) {
            return Err(Error::InvalidMorphism(format!(
                "vertex index {v} outside the target"
            )));
        }
        for (e, img) in edge_map.iter().enumerate() {
            let (o, t) = (vertex_map[source.origin(e)], vertex_map[source.terminus(e)]);
            let ok = match *img {
                EdgeImage::Edge(f) => {
                    f < target.edge_count() && target.origin(f) == o && target.terminus(f) == t
                }
                EdgeImage::Vertex(v) => v < target.vertex_count() && o == v && t == v,
            };
            if !ok {
                return Err(Error::InvalidMorphism(format!(
                    "edge `{}` is not mapped compatibly with its endpoints",
                    source.edge(e).id
                )));
            }
        }
        Ok(GraphMorphism {
            source: source.clone(),
            target: target.clone(),
            vertex_map,
            edge_map,
        })
    }

    pub fn identity(g: &Graph) -> Self {
        GraphMorphism {
            source: g.clone(),
            target: g.clone(),
            vertex_map: (0..g.vertex_count()).collect(),
            edge_map: (0..g.edge_count()).map(EdgeImage::Edge).collect(),
        }
    }

    pub fn from_spec(source: &Graph, target: &Graph, spec: &MorphismSpec) -> Result<Self> {
        let mut vertex_map = Vec::with_capacity(source.vertex_count());
        for v in source.vertices() {
            let img = spec
                .vertex_map
                .get(v)
                .ok_or_else(|| Error::InvalidMorphism(format!("vertex `{v}` has no image")))?;
            vertex_map.push(lookup_vertex(target, img)?);
        }
        let mut edge_map = Vec::with_capacity(source.edge_count());
        for e in source.edges() {
            let img = spec
                .edge_map
                .get(&e.id)
                .ok_or_else(|| Error::InvalidMorphism(format!("edge `{}` has no image", e.id)))?;
            edge_map.push(match img {
                EdgeImageSpec::Edge(f) => EdgeImage::Edge(
                    target
                        .edge_index(f)
                        .ok_or_else(|| Error::UnknownEdge(f.clone()))?,
                ),
                EdgeImageSpec::Vertex(v) => EdgeImage::Vertex(lookup_vertex(target, v)?),
            });
        }
        for k in spec.vertex_map.keys() {
            if source.vertex_index(k).is_none() {
                return Err(Error::UnknownVertex(k.clone()));
            }
        }
        for k in spec.edge_map.keys() {
            if source.edge_index(k).is_none() {
                return Err(Error::UnknownEdge(k.clone()));
            }
        }
        Self::new(source, target, vertex_map, edge_map)
    }

    /// Parses a morphism whose JSON embeds the target graph; returns the
    /// target modulus if the embedded graph carries one.
    pub fn from_json(source: &Graph, text: &str) -> Result<(Self, Option<Modulus>)> {
        let spec = MorphismSpec::from_json(text)?;
        let target_spec = spec
            .target
            .as_ref()
            .ok_or_else(|| Error::Parse("morphism JSON has no `target` graph".into()))?;
        let (target, m) = target_spec.build()?;
        Ok((Self::from_spec(source, &target, &spec)?, m))
    }

    pub fn to_spec(&self, target_modulus: Option<&Modulus>) -> MorphismSpec {
        let s = &self.source;
        let t = &self.target;
        MorphismSpec {
            target: Some(GraphSpec::from_graph(t, target_modulus)),
            vertex_map: (0..s.vertex_count())
                .map(|v| {
                    (
                        s.vertex_id(v).to_string(),
                        t.vertex_id(self.vertex_map[v]).to_string(),
                    )
                })
                .collect(),
            edge_map: (0..s.edge_count())
                .map(|e| {
                    let img = match self.edge_map[e] {
                        EdgeImage::Edge(f) => EdgeImageSpec::Edge(t.edge(f).id.clone()),
                        EdgeImage::Vertex(v) => EdgeImageSpec::Vertex(t.vertex_id(v).to_string()),
                    };
                    (s.edge(e).id.clone(), img)
                })
                .collect(),
        }
    }

    pub fn source(&self) -> &Graph {
        &self.source
    }

    pub fn target(&self) -> &Graph {
        &self.target
    }

    pub fn vertex_image(&self, v: usize) -> usize {
        self.vertex_map[v]
    }

    pub fn edge_image(&self, e: usize) -> EdgeImage {
        self.edge_map[e]
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &GraphMorphism) -> Result<GraphMorphism> {
        if first.target != self.source {
            return Err(Error::InvalidMorphism(
                "morphisms are not composable".into(),
            ));
        }
        let vertex_map = first
            .vertex_map
            .iter()
            .map(|&v| self.vertex_map[v])
            .collect();
        let edge_map = first
            .edge_map
            .iter()
            .map(|img| match *img {
                EdgeImage::Edge(f) => self.edge_map[f],
                EdgeImage::Vertex(v) => EdgeImage::Vertex(self.vertex_map[v]),
            })
            .collect();
        GraphMorphism::new(&first.source, &self.target, vertex_map, edge_map)
    }

    /// Preimages of target edges, in source edge order.
    fn fibres(&self) -> Vec<Vec<usize>> {
        let mut fib = vec![Vec::new(); self.target.edge_count()];
        for (e, img) in self.edge_map.iter().enumerate() {
            if let EdgeImage::Edge(f) = *img {
                fib[f].push(e);
            }
        }
        fib
    }

    /// `φ_V` linearly extended: `Z^V -> Z^{V'}`.
    pub fn vertex_push_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.target.vertex_count(), self.source.vertex_count());
        for (v, &w) in self.vertex_map.iter().enumerate() {
            m.set(w, v, BigInt::one());
        }
        m
    }

    /// `v ↦ m(φ, v) φ(v)`.
    pub fn weighted_push_matrix(&self, mult: &[usize]) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.target.vertex_count(), self.source.vertex_count());
        for (v, &w) in self.vertex_map.iter().enumerate() {
            m.set(w, v, BigInt::from(mult[v]));
        }
        m
    }

    /// Edge pullback `C¹(Γ') -> C¹(Γ)`; collapsed edges give zero rows.
    pub fn edge_pullback_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.source.edge_count(), self.target.edge_count());
        for (e, img) in self.edge_map.iter().enumerate() {
            if let EdgeImage::Edge(f) = *img {
                m.set(e, f, BigInt::one());
            }
        }
        m
    }
}

fn lookup_vertex(g: &Graph, id: &str) -> Result<usize> {
    g.vertex_index(id)
        .ok_or_else(|| Error::UnknownVertex(id.to_string()))
}

/// `m(φ, v)` for every source vertex.
///
/// At `v` the fibres of `Φ₀` over edges leaving `φ(v)` and of `Φ₁` over
/// edges entering `φ(v)` must all have one size.
pub fn harmonic_multiplicities(f: &GraphMorphism) -> Result<Vec<usize>> {
    let (s, t) = (&f.source, &f.target);
    if s.edge_count() == 0 || t.edge_count() == 0 {
        return Err(Error::PreconditionViolated("both graphs need edges".into()));
    }
    let fibres = f.fibres();
    let mut out = Vec::with_capacity(s.vertex_count());
    for v in 0..s.vertex_count() {
        let w = f.vertex_map[v];
        let mut sizes = Vec::new();
        for (e2, fib) in fibres.iter().enumerate() {
            if t.origin(e2) == w {
                sizes.push(fib.iter().filter(|&&e| s.origin(e) == v).count());
            }
            if t.terminus(e2) == w {
                sizes.push(fib.iter().filter(|&&e| s.terminus(e) == v).count());
            }
        }
        match sizes.split_first() {
            None => out.push(0),
            Some((&first, rest)) if rest.iter().all(|&k| k == first) => out.push(first),
            Some(_) => {
                return Err(Error::NotHarmonicAt {
                    vertex: s.vertex_id(v).to_string(),
                    sizes,
                })
            }
        }
    }
    Ok(out)
}

fn as_violation(check: &'static str) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::NotWellDefined(w) => Error::violation(check, w),
        other => other,
    }
}

/// A harmonic morphism of connected graphs with both Jacobian contexts.
#[derive(Clone, Debug)]
pub struct MorphismContext {
    morphism: GraphMorphism,
    multiplicities: Vec<usize>,
    source: JacobianContext,
    target: JacobianContext,
}

impl MorphismContext {
    pub fn new(f: &GraphMorphism) -> Result<Self> {
        let multiplicities = harmonic_multiplicities(f)?;
        Ok(MorphismContext {
            morphism: f.clone(),
            multiplicities,
            source: JacobianContext::new(&f.source)?,
            target: JacobianContext::new(&f.target)?,
        })
    }

    pub fn morphism(&self) -> &GraphMorphism {
        &self.morphism
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    pub fn source(&self) -> &JacobianContext {
        &self.source
    }

    pub fn target(&self) -> &JacobianContext {
        &self.target
    }

    /// `Σ_{φ(v) = v'} m(φ, v)` for each target vertex.
    pub fn fibre_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.morphism.target.vertex_count()];
        for (v, &w) in self.morphism.vertex_map.iter().enumerate() {
            deg[w] += self.multiplicities[v];
        }
        deg
    }

    /// `φ^m`: transpose of `v ↦ m(φ, v) φ(v)`.
    pub fn phi_m(&self) -> IntMatrix {
        self.morphism
            .weighted_push_matrix(&self.multiplicities)
            .transpose()
    }

    /// `φ_*` on the `{v - v₀}` coordinates of `Cl⁰`.
    fn degree_zero_push(&self) -> IntMatrix {
        let (n, n2) = (
            self.morphism.source.vertex_count(),
            self.morphism.target.vertex_count(),
        );
        let base = self.morphism.vertex_map[0];
        let mut m = IntMatrix::zeros(n2 - 1, n - 1);
        for v in 1..n {
            let w = self.morphism.vertex_map[v];
            if w > 0 {
                *m.entry_mut(w - 1, v - 1) += 1;
            }
            if base > 0 {
                *m.entry_mut(base - 1, v - 1) -= 1;
            }
        }
        m
    }

    /// `φ_* : Cl⁰(Γ) -> Cl⁰(Γ')`.
    pub fn pushforward_cl(&self) -> Result<GroupHom> {
        GroupHom::induced(
            self.source.cl0(),
            self.target.cl0(),
            &self.degree_zero_push(),
        )
        .map_err(as_violation("pushforward_prin"))
    }

    /// `φ^m : Ĉl(Γ') -> Ĉl(Γ)`.
    pub fn pullback_clhat(&self) -> Result<GroupHom> {
        let src = Arc::new(self.target.clhat());
        let tgt = Arc::new(self.source.clhat());
        GroupHom::induced(&src, &tgt, &self.phi_m()).map_err(as_violation("pullback_prin_hat"))
    }

    /// `φ^m : Ĉl⁰(Γ') -> Ĉl⁰(Γ)`.
    pub fn pullback_clhat0(&self) -> Result<GroupHom> {
        GroupHom::induced(self.target.clhat0(), self.source.clhat0(), &self.phi_m())
            .map_err(as_violation("pullback_clhat0"))
    }

    /// `φ* : ker d♯' -> ker d♯` on the harmonic bases: `W T = φ¹ W'`.
    pub fn pullback_harmonic(&self) -> Result<IntMatrix> {
        let image = &self.morphism.edge_pullback_matrix() * self.target.harmonic();
        if !(self.source.complex().d_adj() * &image).is_zero() {
            return Err(Error::violation(
                "pullback_harmonic",
                "pulled back harmonic form leaves ker d♯",
            ));
        }
        solve_matrix(self.source.harmonic(), &image)
            .ok_or_else(|| Error::violation("pullback_harmonic", "image not in the harmonic span"))
    }

    /// `tr(φ*) : J(Γ) -> J(Γ')`.
    pub fn jacobian_map(&self) -> Result<GroupHom> {
        let t = self.pullback_harmonic()?;
        GroupHom::induced(self.source.jac(), self.target.jac(), &t.transpose())
            .map_err(as_violation("jacobian_map"))
    }

    /// `φ¹ : P(Γ') -> P(Γ)`.
    pub fn pullback_p(&self) -> Result<GroupHom> {
        GroupHom::induced(
            self.target.pic(),
            self.source.pic(),
            &self.morphism.edge_pullback_matrix(),
        )
        .map_err(as_violation("pullback_p"))
    }

    /// All modulus-free functoriality checks.
    pub fn verify(&self) -> CheckReport {
        let mut r = CheckReport::new();
        let push = r.record_result("pushforward_cl", self.pushforward_cl());
        let jmap = r.record_result("jacobian_map", self.jacobian_map());
        if let (Some(push), Some(jmap)) = (&push, &jmap) {
            let natural = (|| -> Result<bool> {
                let left = self.target.abel_jacobi_hom()?.compose(push)?;
                let right = jmap.compose(&self.source.abel_jacobi_hom()?)?;
                Ok(left.equals(&right))
            })();
            match natural {
                Ok(ok) => r.record("aj_naturality", ok, || "AJ'∘φ_* ≠ tr(φ*)∘AJ".into()),
                Err(e) => r.fail("aj_naturality", e.to_string()),
            }
        }
        r.record_result("pullback_clhat", self.pullback_clhat());
        let clhat0 = r.record_result("pullback_clhat0", self.pullback_clhat0());

        let degrees = self.fibre_degrees();
        r.record(
            "constant_degree",
            degrees.windows(2).all(|w| w[0] == w[1]),
            || format!("fibre degrees {degrees:?}"),
        );
        let phi_m = self.phi_m();
        let summed: Vec<BigInt> = (0..phi_m.cols())
            .map(|j| phi_m.column(j).iter().sum())
            .collect();
        r.record(
            "clhat_degree",
            summed
                .iter()
                .zip(&degrees)
                .all(|(a, &b)| *a == BigInt::from(b)),
            || format!("deg φ^m(v') = {summed:?}, fibre degrees {degrees:?}"),
        );
        r.note("degree", degrees.first().copied().unwrap_or(0).to_string());

        if self.multiplicities.iter().all(|&k| k == 1) {
            let push = self.morphism.vertex_push_matrix();
            r.record("ambient_adjointness", push.transpose() == phi_m, || {
                "⟨φ_*x, y⟩ ≠ ⟨x, φ^m y⟩".into()
            });
        } else {
            r.skip("ambient_adjointness", "multiplicity different from 1");
        }

        let pull_p = r.record_result("pullback_p", self.pullback_p());
        if let (Some(pull_p), Some(clhat0)) = (pull_p, clhat0) {
            let square = (|| -> Result<bool> {
                let left = self.source.chi()?.compose(&pull_p)?;
                let right = clhat0.compose(&self.target.chi()?)?;
                Ok(left.equals(&right))
            })();
            match square {
                Ok(ok) => r.record("chi_square", ok, || "χ∘φ¹ ≠ φ^m∘χ'".into()),
                Err(e) => r.fail("chi_square", e.to_string()),
            }
        }
        r
    }
}

/// `φ_* : Cl⁰(Γ) -> Cl⁰(Γ')`.
pub fn pushforward_cl(f: &GraphMorphism) -> Result<GroupHom> {
    MorphismContext::new(f)?.pushforward_cl()
}

/// `φ^m : Ĉl(Γ') -> Ĉl(Γ)`.
pub fn pullback_clhat(f: &GraphMorphism) -> Result<GroupHom> {
    MorphismContext::new(f)?.pullback_clhat()
}

/// `φ*` on harmonic bases, `ker d♯' -> ker d♯`.
pub fn pullback_harmonic(f: &GraphMorphism) -> Result<IntMatrix> {
    MorphismContext::new(f)?.pullback_harmonic()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// `Cl_m(Γ) -> Cl_m'(Γ')`; needs `φ⁻¹(S') ⊂ S`.
    Pushforward,
    /// `Ĉl_m'(Γ') -> Ĉl_m(Γ)`; needs `φ(S) ⊂ S'`.
    Pullback,
}

/// Whether the support condition of `direction` holds for reduced moduli.
pub fn direction_applies(
    f: &GraphMorphism,
    m: &Modulus,
    m2: &Modulus,
    direction: Direction,
) -> bool {
    let s = m.support();
    let s2 = m2.support();
    match direction {
        Direction::Pushforward => (0..f.source.vertex_count())
            .filter(|&v| s2.contains(&f.vertex_map[v]))
            .all(|v| s.contains(&v)),
        Direction::Pullback => s.iter().all(|&v| s2.contains(&f.vertex_map[v])),
    }
}

/// Functoriality of the modulus theory along `f` for moduli `m` on the
/// source and `m2` on the target. Non-reduced moduli are replaced by their
/// reductions first.
pub fn modulus_functoriality(
    f: &GraphMorphism,
    m: &Modulus,
    m2: &Modulus,
    direction: Direction,
) -> Result<CheckReport> {
    let ctx = MorphismContext::new(f)?;
    let mut r = CheckReport::new();
    if !m.is_reduced() || !m2.is_reduced() {
        r.note("reduced", "non-reduced modulus replaced by its support");
    }
    let (m, m2) = (m.reduced(), m2.reduced());
    if !direction_applies(f, &m, &m2, direction) {
        let need = match direction {
            Direction::Pushforward => "φ⁻¹(S') ⊂ S",
            Direction::Pullback => "φ(S) ⊂ S'",
        };
        return Err(Error::PreconditionViolated(format!("{need} fails")));
    }
    let src = ModulusContext::from_base(ctx.source.clone(), &m)?;
    let tgt = ModulusContext::from_base(ctx.target.clone(), &m2)?;
    let fm = ModulusFunctor {
        ctx: &ctx,
        src: &src,
        tgt: &tgt,
    };
    match direction {
        Direction::Pushforward => fm.pushforward(&mut r),
        Direction::Pullback => fm.pullback(&mut r)?,
    }
    Ok(r)
}

struct ModulusFunctor<'a> {
    ctx: &'a MorphismContext,
    src: &'a ModulusContext,
    tgt: &'a ModulusContext,
}

impl ModulusFunctor<'_> {
    /// `μ_L : Z^S -> Z^{S'}`, `s ↦ m(φ, s) φ(s)` when `φ(s) ∈ S'`.
    fn mu(&self) -> IntMatrix {
        let (m, m2) = (self.src.modulus(), self.tgt.modulus());
        let mut mu = IntMatrix::zeros(m2.len(), m.len());
        for i in 0..m.len() {
            let w = self.ctx.morphism.vertex_map[m.point(i)];
            for j in m2.indices_at(w) {
                mu.set(j, i, BigInt::from(self.ctx.multiplicities[m.point(i)]));
            }
        }
        mu
    }

    /// `φ_L^T : Z^{S'} -> Z^S`, `(φ^S k)(s) = k(φ(s))`.
    fn phi_s(&self) -> IntMatrix {
        let (m, m2) = (self.src.modulus(), self.tgt.modulus());
        let mut p = IntMatrix::zeros(m.len(), m2.len());
        for i in 0..m.len() {
            for j in m2.indices_at(self.ctx.morphism.vertex_map[m.point(i)]) {
                p.set(i, j, BigInt::one());
            }
        }
        p
    }

    fn pushforward(&self, r: &mut CheckReport) {
        let mu = self.mu();
        let n = self.ctx.morphism.source.vertex_count();
        let full = IntMatrix::block_diag(&self.ctx.morphism.vertex_push_matrix(), &mu);
        let (clm, clm2) = (Arc::new(self.src.clm()), Arc::new(self.tgt.clm()));
        r.record_result(
            "cl_m",
            GroupHom::induced(&clm, &clm2, &full).map_err(as_violation("cl_m")),
        );
        let push0 = IntMatrix::block_diag(&self.ctx.degree_zero_push(), &mu);
        let push = r.record_result(
            "cl0_m",
            GroupHom::induced(self.src.cl0m(), self.tgt.cl0m(), &push0)
                .map_err(as_violation("cl0_m")),
        );
        debug_assert_eq!(push0.cols(), n - 1 + self.src.modulus().len());

        let pull1 =
            IntMatrix::block_diag(&self.ctx.morphism.edge_pullback_matrix(), &mu.transpose());
        let image = &pull1 * self.tgt.harmonic_m();
        let t = match solve_matrix(self.src.harmonic_m(), &image) {
            Some(t) => {
                r.pass("harmonic_m_pullback");
                t
            }
            None => {
                r.fail(
                    "harmonic_m_pullback",
                    "pulled back form is not harmonic on Γ_m",
                );
                return;
            }
        };
        let jmap = r.record_result(
            "j_m",
            GroupHom::induced(self.src.jm(), self.tgt.jm(), &t.transpose())
                .map_err(as_violation("j_m")),
        );
        if let (Some(push), Some(jmap)) = (push, jmap) {
            let square = (|| -> Result<bool> {
                let left = self.tgt.abel_jacobi_hom()?.compose(&push)?;
                let right = jmap.compose(&self.src.abel_jacobi_hom()?)?;
                Ok(left.equals(&right))
            })();
            match square {
                Ok(ok) => r.record("aj_m_square", ok, || "AJ'_m∘φ_* ≠ tr(φ*)∘AJ_m".into()),
                Err(e) => r.fail("aj_m_square", e.to_string()),
            }
        }
    }

    fn pullback(&self, r: &mut CheckReport) -> Result<()> {
        let f = &self.ctx.morphism;
        let phi_s = self.phi_s();
        let hat = IntMatrix::block_diag(&self.ctx.phi_m(), &phi_s);
        let (clhatm, clhatm2) = (Arc::new(self.src.clhatm()), Arc::new(self.tgt.clhatm()));
        let pull_hat = r.record_result(
            "clhat_m",
            GroupHom::induced(&clhatm2, &clhatm, &hat).map_err(as_violation("clhat_m")),
        );
        let pull_hat0 = r.record_result(
            "clhat0_m",
            GroupHom::induced(self.tgt.clhat0m(), self.src.clhat0m(), &hat)
                .map_err(as_violation("clhat0_m")),
        );
        let pull_p = r.record_result(
            "p_m",
            GroupHom::induced(
                self.tgt.pm(),
                self.src.pm(),
                &IntMatrix::block_diag(&f.edge_pullback_matrix(), &phi_s),
            )
            .map_err(as_violation("p_m")),
        );
        if let (Some(pull_p), Some(pull_hat0)) = (&pull_p, &pull_hat0) {
            let square = (|| -> Result<bool> {
                let left = self.src.chi_m()?.compose(pull_p)?;
                let right = pull_hat0.compose(&self.tgt.chi_m()?)?;
                Ok(left.equals(&right))
            })();
            match square {
                Ok(ok) => r.record("chi_m_square", ok, || "χ_m∘φ_P ≠ φ*∘χ'_m".into()),
                Err(e) => r.fail("chi_m_square", e.to_string()),
            }
        }

        // Pic_m(|Γ|) through the Čech complexes of Harm_m.
        let (m, m2) = (self.src.modulus(), self.tgt.modulus());
        let pic = rigidified_picard(&f.source, m)?;
        let pic2 = rigidified_picard(&f.target, m2)?;
        let s = build_standard_sheaves(&f.source)?;
        let s2 = build_standard_sheaves(&f.target)?;
        let (c1, c12) = (s.harm.c1_rank(), s2.harm.c1_rank());
        if pic.picm.ambient_rank() != c1 + m.len() || pic2.picm.ambient_rank() != c12 + m2.len() {
            return Err(Error::DimensionMismatch(
                "Pic_m ambient is not C¹(Harm) ⊕ Z^I".into(),
            ));
        }
        let mut cech = IntMatrix::zeros(c1, c12);
        for e in 0..f.source.edge_count() {
            if let EdgeImage::Edge(e2) = f.edge_map[e] {
                let (a, b) = (s.harm.edge_offset(e), s2.harm.edge_offset(e2));
                for k in 0..s.harm.edge_rank(e) {
                    cech.set(a + k, b + k, BigInt::one());
                }
            }
        }
        let pull_pic = r.record_result(
            "pic_m",
            GroupHom::induced(&pic2.picm, &pic.picm, &IntMatrix::block_diag(&cech, &phi_s))
                .map_err(as_violation("pic_m")),
        );
        let Some(pull_pic) = pull_pic else {
            return Ok(());
        };
        if let Some(pull_hat) = &pull_hat {
            let left = pic.delta_bar_m.compose(pull_hat)?;
            let right = pull_pic.compose(&pic2.delta_bar_m)?;
            r.record("delta_m_square", left.equals(&right), || {
                "δ̄_m∘φ* ≠ |φ|*∘δ̄'_m".into()
            });
        }
        if let Some(pull_p) = &pull_p {
            let star =
                |s: &crate::sheaf::StandardSheaves, ctx: &ModulusContext, h: &Arc<FgAbGroup>| {
                    let mat = IntMatrix::block_diag(
                        &s.constant_on_edges(),
                        &IntMatrix::identity(ctx.modulus().len()),
                    );
                    GroupHom::induced(ctx.pm(), h, &mat)
                };
            let left = star(&s, self.src, &pic.picm)?.compose(pull_p)?;
            let right = pull_pic.compose(&star(&s2, self.tgt, &pic2.picm)?)?;
            r.record("p_m_square", left.equals(&right), || {
                "(**)∘φ_P ≠ |φ|*∘(**)'".into()
            });
        }
        Ok(())
    }
}

/// Every check that applies to `f` and the given moduli: the modulus-free
/// suite, then each direction whose support condition holds.
pub fn functoriality_suite(
    f: &GraphMorphism,
    m: Option<&Modulus>,
    m2: Option<&Modulus>,
) -> Result<CheckReport> {
    let ctx = MorphismContext::new(f)?;
    let mut r = CheckReport::new();
    r.note("multiplicities", format!("{:?}", ctx.multiplicities()));
    r.extend("plain", ctx.verify());
    if let (Some(m), Some(m2)) = (m, m2) {
        let (mr, m2r) = (m.reduced(), m2.reduced());
        for (name, dir) in [
            ("pushforward", Direction::Pushforward),
            ("pullback", Direction::Pullback),
        ] {
            if direction_applies(f, &mr, &m2r, dir) {
                r.extend(name, modulus_functoriality(f, m, m2, dir)?);
            } else {
                r.skip(name, "support condition does not hold");
            }
        }
    }
    Ok(r)
}
