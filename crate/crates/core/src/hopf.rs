//! The homology Hopf algebras of U(n+1) and ΩU(n+1), and their actions on a
//! loop-homology module.
//!
//! Tensor powers A⊗…⊗A are modelled as presentations whose generators are
//! tagged copies `g_1, g_2, …` listed copy by copy, so that products of
//! tensors pick up Koszul signs from ordinary monomial multiplication.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::bv::{BvCache, BvError, BvOperator};
use crate::element::Element;
use crate::hom::{AlgebraMap, MapError};
use crate::monomial::Monomial;
use crate::presentation::{Presentation, PresentationExt};
use crate::report::Report;
use crate::scalar::{CoeffRing, Coefficient};
use crate::window::DegreeWindow;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HopfKind {
    /// ℤ[E₀, E₂, …, E_{2n}], D(E_{2i}) = Σ E_{2j}⊗E_{2i−2j}.
    Loops,
    /// Λ[e₁, e₃, …, e_{2n+1}] with primitive generators.
    Group,
}

#[derive(Clone, Debug)]
pub struct HopfAlgebra<C: Coefficient> {
    n: usize,
    kind: HopfKind,
    algebra: Arc<Presentation<C>>,
    square: Arc<Presentation<C>>,
    cube: Arc<Presentation<C>>,
    coproduct: AlgebraMap<C>,
}

fn gen_name(kind: HopfKind, i: usize) -> String {
    match kind {
        HopfKind::Loops => alloc::format!("E{}", 2 * i),
        HopfKind::Group => alloc::format!("e{}", 2 * i + 1),
    }
}

fn gen_degree(kind: HopfKind, i: usize) -> i64 {
    match kind {
        HopfKind::Loops => 2 * i as i64,
        HopfKind::Group => 2 * i as i64 + 1,
    }
}

fn tensor_power<C: Coefficient>(n: usize, kind: HopfKind, ring: CoeffRing, k: usize) -> Arc<Presentation<C>> {
    let mut b = Presentation::builder(ring);
    let mut order = Vec::new();
    for copy in 1..=k {
        for i in 0..=n {
            let name = if k == 1 { gen_name(kind, i) } else { alloc::format!("{}_{}", gen_name(kind, i), copy) };
            b = b.generator(&name, gen_degree(kind, i));
            order.push(name);
        }
    }
    b.order_owned(order).build().expect("free presentation")
}

impl<C: Coefficient> HopfAlgebra<C> {
    pub fn new(n: usize, kind: HopfKind, ring: CoeffRing) -> Self {
        let algebra = tensor_power(n, kind, ring, 1);
        let square = tensor_power(n, kind, ring, 2);
        let cube = tensor_power(n, kind, ring, 3);
        let copy = |i: usize, c: usize| square.gen(&alloc::format!("{}_{}", gen_name(kind, i), c));
        let images: Vec<(String, Element<C>)> = (0..=n)
            .map(|i| {
                let img = match kind {
                    HopfKind::Loops => {
                        let mut acc = square.zero();
                        for j in 0..=i {
                            acc = acc + &copy(j, 1) * &copy(i - j, 2);
                        }
                        acc
                    }
                    HopfKind::Group => copy(i, 1) + copy(i, 2),
                };
                (gen_name(kind, i), img)
            })
            .collect();
        let refs: Vec<(&str, Element<C>)> = images.iter().map(|(s, e)| (s.as_str(), e.clone())).collect();
        let coproduct = AlgebraMap::new(&algebra, &square, &refs).expect("coproduct images");
        HopfAlgebra { n, kind, algebra, square, cube, coproduct }
    }

    pub fn loops(n: usize, ring: CoeffRing) -> Self {
        Self::new(n, HopfKind::Loops, ring)
    }

    pub fn group(n: usize, ring: CoeffRing) -> Self {
        Self::new(n, HopfKind::Group, ring)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> HopfKind {
        self.kind
    }

    pub fn algebra(&self) -> &Arc<Presentation<C>> {
        &self.algebra
    }

    pub fn tensor_square(&self) -> &Arc<Presentation<C>> {
        &self.square
    }

    /// `E_{2i}` or `e_{2i+1}`.
    pub fn generator(&self, i: usize) -> Element<C> {
        self.algebra.gen(&gen_name(self.kind, i))
    }

    pub fn coproduct(&self, x: &Element<C>) -> Element<C> {
        self.coproduct.apply(x)
    }

    /// Splits a monomial of A⊗A into its two tensor factors.
    pub fn split(&self, m: &Monomial) -> (Monomial, Monomial) {
        let k = self.n + 1;
        (Monomial::from_exponents(&m.exponents()[..k]), Monomial::from_exponents(&m.exponents()[k..]))
    }

    /// D(x) as a list of (left, right, coefficient).
    pub fn coproduct_terms(&self, x: &Element<C>) -> Vec<(Monomial, Monomial, C)> {
        self.coproduct(x)
            .terms()
            .iter()
            .map(|(m, c)| {
                let (l, r) = self.split(m);
                (l, r, c.clone())
            })
            .collect()
    }

    pub fn counit(&self, x: &Element<C>) -> C {
        let mut acc = C::zero();
        for (m, c) in x.terms() {
            let ok = match self.kind {
                HopfKind::Loops => m.support().all(|i| i == 0),
                HopfKind::Group => m.is_one(),
            };
            if ok {
                acc = acc + c.clone();
            }
        }
        acc
    }

    fn counit_monomial(&self, m: &Monomial) -> C {
        self.counit(&self.algebra.monomial(m))
    }

    /// σ(E^α) = Σ_i α_i ε(E^{α−e_i}) e_{2i+1}, as coefficients on e₁…e_{2n+1}.
    pub fn suspension(&self, x: &Element<C>) -> Vec<C> {
        let mut out = alloc::vec![C::zero(); self.n + 1];
        if self.kind != HopfKind::Loops {
            return out;
        }
        for (m, c) in x.terms() {
            for i in m.support() {
                let mut rest = m.clone();
                rest.set_exponent(i, m.exponent(i) - 1);
                let k = C::from_i64(m.exponent(i) as i64) * self.counit_monomial(&rest);
                out[i] = out[i].clone() + k * c.clone();
            }
        }
        out
    }

    fn copy_map(&self, slots: [usize; 2], dup: Option<usize>) -> AlgebraMap<C> {
        // A⊗A → A⊗A⊗A sending copy 1 to slot(s) and copy 2 to the other
        let n = self.n;
        let kind = self.kind;
        let cube = &self.cube;
        let mut images = Vec::new();
        for copy in 1..=2usize {
            for i in 0..=n {
                let src = alloc::format!("{}_{}", gen_name(kind, i), copy);
                let target = slots[copy - 1];
                let img = if dup == Some(copy) {
                    // D applied to this copy, landing in slots target, target+1
                    let d = self.coproduct(&self.generator(i));
                    let mut acc = cube.zero();
                    for (m, c) in d.terms() {
                        let (l, r) = self.split(m);
                        let lift = |mono: &Monomial, slot: usize| {
                            let mut out = cube.one();
                            for j in mono.support() {
                                for _ in 0..mono.exponent(j) {
                                    out = &out * &cube.gen(&alloc::format!("{}_{}", gen_name(kind, j), slot));
                                }
                            }
                            out
                        };
                        acc = acc.add_scaled(&(&lift(&l, target) * &lift(&r, target + 1)), c);
                    }
                    acc
                } else {
                    cube.gen(&alloc::format!("{}_{}", gen_name(kind, i), target))
                };
                images.push((src, img));
            }
        }
        let refs: Vec<(&str, Element<C>)> = images.iter().map(|(s, e)| (s.as_str(), e.clone())).collect();
        AlgebraMap::new(&self.square, cube, &refs).expect("copy map")
    }

    /// Coassociativity, counit laws and the generator tables on a window.
    pub fn check_hopf_tables(&self, window: &DegreeWindow) -> Result<Report<C>, MapError<C>> {
        let mut r = Report::new("hopf-tables", window.describe());
        let left = self.copy_map([1, 3], Some(1));
        let right = self.copy_map([1, 2], Some(2));
        let basis = self.algebra.window_basis(window).map_err(|_| MapError::Truncated(0))?;
        for e in &basis {
            let x = self.algebra.monomial(&e.monomial);
            let d = self.coproduct(&x);
            let name = self.algebra.format_monomial(&e.monomial);
            r.record(alloc::vec![alloc::format!("coassociativity {name}")], left.apply(&d) - right.apply(&d));
            let mut lc = self.algebra.zero();
            let mut rc = self.algebra.zero();
            for (m, c) in d.terms() {
                let (a, b) = self.split(m);
                let ea = self.counit_monomial(&a);
                let eb = self.counit_monomial(&b);
                lc = lc.add_scaled(&self.algebra.monomial(&b), &(ea * c.clone()));
                rc = rc.add_scaled(&self.algebra.monomial(&a), &(eb * c.clone()));
            }
            r.record(alloc::vec![alloc::format!("counit-left {name}")], lc - x.clone());
            r.record(alloc::vec![alloc::format!("counit-right {name}")], rc - x.clone());
        }
        let sq = &self.square;
        for i in 0..=self.n {
            let d = self.coproduct(&self.generator(i));
            let want = match self.kind {
                HopfKind::Loops => {
                    let mut acc = sq.zero();
                    for j in 0..=i {
                        let t = alloc::format!("{}_1·{}_2", gen_name(self.kind, j), gen_name(self.kind, i - j));
                        acc = acc + sq.parse_element(&t).expect("tensor term");
                    }
                    acc
                }
                HopfKind::Group => {
                    let g = gen_name(self.kind, i);
                    sq.parse_element(&alloc::format!("{g}_1 + {g}_2")).expect("primitive")
                }
            };
            r.record(alloc::vec![alloc::format!("coproduct {}", gen_name(self.kind, i))], d - want);
            if self.kind == HopfKind::Loops {
                let s = self.suspension(&self.generator(i));
                let ok = s.iter().enumerate().all(|(j, c)| if j == i { c.is_one() } else { c.is_zero() });
                let defect = if ok { self.algebra.zero() } else { self.generator(i) };
                r.record(alloc::vec![alloc::format!("suspension {}", gen_name(self.kind, i))], defect);
            }
        }
        Ok(r)
    }
}

/// ∂ with respect to generator `g`: kills monomials without `g`, and
/// removes one `g` from the rest with the sign of moving it to the front.
pub fn partial<C: Coefficient>(x: &Element<C>, g: usize) -> Element<C> {
    let p = x.algebra().clone();
    let gdeg = p.generators()[g].degree;
    x.map_linear(|m| {
        let e = m.exponent(g);
        if e == 0 {
            return p.zero();
        }
        let prefix: i64 = (0..g).map(|i| m.exponent(i) as i64 * p.generators()[i].degree).sum();
        let s = if (gdeg * prefix).rem_euclid(2) == 0 { 1 } else { -1 };
        let mut rest = m.clone();
        rest.set_exponent(g, e - 1);
        p.term(&rest, C::from_i64(s * e as i64))
    })
}

/// ∂_w on the ℂPⁿ presentation.
pub fn partial_w<C: Coefficient>(x: &Element<C>) -> Element<C> {
    let g = x.algebra().generator_index("w").expect("presentation has w");
    partial(x, g)
}

/// e_{2j+1}·x = (j+1)·cⁿ⁻ʲ·v·∂_w x.
pub fn e_act<C: Coefficient>(n: usize, j: usize, x: &Element<C>) -> Element<C> {
    let p = x.algebra();
    let c = p.gen("c").pow((n - j) as u32);
    (&(&c * &p.gen("v")) * &partial_w(x)).scale_i64(j as i64 + 1)
}

/// Values of the two actions on the module, determined by E_{2i}·1 and by
/// e_{2j+1} on the module generators.
#[derive(Clone, Debug)]
pub struct ActionTable<C: Coefficient> {
    pub module: Arc<Presentation<C>>,
    pub n: usize,
    pub omega_values: Vec<Element<C>>,
    /// `g_values[j][k]` = e_{2j+1}·(k-th module generator).
    pub g_values: Vec<Vec<Element<C>>>,
}

impl<C: Coefficient> ActionTable<C> {
    /// a·1 for a in the loop Hopf algebra.
    pub fn unit_image(&self, a: &Element<C>) -> Element<C> {
        let mut out = self.module.zero();
        for (m, c) in a.terms() {
            let mut t = self.module.one();
            for i in m.support() {
                t = &t * &self.omega_values[i].pow(m.exponent(i));
            }
            out = out.add_scaled(&t, c);
        }
        out
    }

    pub fn omega_act(&self, a: &Element<C>, x: &Element<C>) -> Element<C> {
        &self.unit_image(a) * x
    }

    /// e_{2j+1} acting as a graded derivation of odd degree.
    pub fn e_derivation(&self, j: usize, x: &Element<C>) -> Element<C> {
        let p = self.module.clone();
        let edeg = 2 * j as i64 + 1;
        x.map_linear(|m| {
            let mut out = p.zero();
            let mut prefix = p.one();
            let mut prefix_deg = 0i64;
            for i in 0..p.rank() {
                let g = p.monomial(&Monomial::generator(p.rank(), i));
                for k in 0..m.exponent(i) {
                    let mut suffix = m.clone();
                    for (t, _) in m.exponents().iter().enumerate().take(i) {
                        suffix.set_exponent(t, 0);
                    }
                    suffix.set_exponent(i, m.exponent(i) - k - 1);
                    let s = if (edeg * prefix_deg).rem_euclid(2) == 0 { 1 } else { -1 };
                    let term = &(&prefix * &self.g_values[j][i]) * &p.monomial(&suffix);
                    out = out + term.scale_i64(s);
                    prefix = &prefix * &g;
                    prefix_deg += p.generators()[i].degree;
                }
            }
            out
        })
    }

    /// b·x for b in Λ[e₁,…]; a monomial e_{i₁}⋯e_{i_k} acts innermost-last.
    pub fn group_act(&self, b: &Element<C>, x: &Element<C>) -> Element<C> {
        let mut out = self.module.zero();
        for (m, c) in b.terms() {
            let mut y = x.clone();
            for i in m.support().collect::<Vec<_>>().into_iter().rev() {
                y = self.e_derivation(i, &y);
            }
            out = out.add_scaled(&y, c);
        }
        out
    }

    /// Right-hand side of Δ(ax) = aΔ(x) + Σ a₁σ(a₂)x, using a known Δx.
    pub fn delta_omega_rhs(
        &self,
        loops: &HopfAlgebra<C>,
        a: &Element<C>,
        x: &Element<C>,
        dx: &Element<C>,
    ) -> Element<C> {
        let mut out = self.omega_act(a, dx);
        for (l, r, c) in loops.coproduct_terms(a) {
            let s = loops.suspension(&loops.algebra().monomial(&r));
            for (i, k) in s.iter().enumerate() {
                if k.is_zero() {
                    continue;
                }
                let ex = self.e_derivation(i, x);
                let t = self.omega_act(&loops.algebra().monomial(&l), &ex);
                out = out.add_scaled(&t, &(k.clone() * c.clone()));
            }
        }
        out
    }
}

/// Δ(v·x) through the E_{2n} case of the Δ(ax) law:
/// Σ_i (E_{2n−2i}·1)(e_{2i+1}x) + (E_{2n}·1)Δx.
pub fn delta_v_multiple<C: Coefficient>(
    table: &ActionTable<C>,
    loops: &HopfAlgebra<C>,
    x: &Element<C>,
    dx: &Element<C>,
) -> Element<C> {
    table.delta_omega_rhs(loops, &loops.generator(table.n), x, dx)
}

/// Inputs for the action-law audit.
pub struct ActionAudit<'a, C: Coefficient> {
    pub op: &'a BvOperator<C>,
    pub table: &'a ActionTable<C>,
    pub loops: &'a HopfAlgebra<C>,
    pub group: &'a HopfAlgebra<C>,
    /// Module window.
    pub window: &'a DegreeWindow,
    /// Exponent cap for monomials of the loop Hopf algebra.
    pub loops_window: &'a DegreeWindow,
}

fn sign(parity: i64) -> i64 {
    if parity.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// The product, Δ(ax), Cartan and Δ(bx) laws, the unit-image corollary,
/// and the e-action closed form, one report per law.
pub fn check_action_laws<C: Coefficient>(audit: &ActionAudit<'_, C>) -> Result<Vec<Report<C>>, BvError> {
    let ActionAudit { op, table, loops, group, window, loops_window } = *audit;
    let p = op.algebra().clone();
    let label = window.describe();
    let basis: Vec<Monomial> = p.window_basis(window)?.into_iter().map(|e| e.monomial).collect();
    let omegas: Vec<Monomial> = loops.algebra().window_basis(loops_window)?.into_iter().map(|e| e.monomial).collect();
    let groups: Vec<Monomial> =
        group.algebra().window_basis(&DegreeWindow::new(1))?.into_iter().map(|e| e.monomial).collect();
    let mut cache = BvCache::new(op);
    let la = loops.algebra();
    let ga = group.algebra();
    let fm = |m: &Monomial| p.format_monomial(m);

    let mut product = Report::new("omega-product", label.clone());
    let mut eq3 = Report::new("delta-omega", label.clone());
    for a in &omegas {
        let ae = la.monomial(a);
        for x in &basis {
            let xe = p.monomial(x);
            let dx = cache.delta(&xe)?;
            let lhs = cache.delta(&table.omega_act(&ae, &xe))?;
            eq3.record(alloc::vec![la.format_monomial(a), fm(x)], lhs - table.delta_omega_rhs(loops, &ae, &xe, &dx));
            for y in &basis {
                let ye = p.monomial(y);
                let axy = table.omega_act(&ae, &(&xe * &ye));
                let inputs = alloc::vec![la.format_monomial(a), fm(x), fm(y)];
                product.record(inputs.clone(), &axy - &(&table.omega_act(&ae, &xe) * &ye));
                product.record(inputs, &axy - &(&xe * &table.omega_act(&ae, &ye)));
            }
        }
    }

    let mut cartan = Report::new("group-cartan", label.clone());
    let mut eq6 = Report::new("delta-group", label.clone());
    for b in &groups {
        let be = ga.monomial(b);
        let bdeg = ga.degree_of(b);
        let dterms = group.coproduct_terms(&be);
        for x in &basis {
            let xe = p.monomial(x);
            let bx = table.group_act(&be, &xe);
            let res = cache.delta(&bx)? - table.group_act(&be, &cache.delta(&xe)?).scale_i64(sign(bdeg));
            eq6.record(alloc::vec![ga.format_monomial(b), fm(x)], res);
            for y in &basis {
                let ye = p.monomial(y);
                let mut rhs = p.zero();
                for (l, r, c) in &dterms {
                    let s = sign(ga.degree_of(r) * p.degree_of(x));
                    let t = &table.group_act(&ga.monomial(l), &xe) * &table.group_act(&ga.monomial(r), &ye);
                    rhs = rhs.add_scaled(&t.scale_i64(s), c);
                }
                let res = table.group_act(&be, &(&xe * &ye)) - rhs;
                cartan.record(alloc::vec![ga.format_monomial(b), fm(x), fm(y)], res);
            }
        }
    }

    let mut hom = Report::new("unit-image-homomorphism", label.clone());
    let mut killed = Report::new("delta-on-unit-image", label.clone());
    for a in &omegas {
        let ae = la.monomial(a);
        let a1 = table.unit_image(&ae);
        killed.record(alloc::vec![la.format_monomial(a)], cache.delta(&a1)?);
        for b in &omegas {
            let be = la.monomial(b);
            let res = &a1 * &table.unit_image(&be) - table.unit_image(&(&ae * &be));
            hom.record(alloc::vec![la.format_monomial(a), la.format_monomial(b)], res);
        }
    }

    let mut closed = Report::new("e-action-closed-form", label.clone());
    let mut dv = Report::new("delta-v-multiple", label);
    for x in &basis {
        let xe = p.monomial(x);
        for j in 0..=table.n {
            let res = table.e_derivation(j, &xe) - e_act(table.n, j, &xe);
            closed.record(alloc::vec![alloc::format!("e{}", 2 * j + 1), fm(x)], res);
        }
        let v = p.gen("v");
        let lhs = cache.delta(&(&v * &xe))?;
        let dx = cache.delta(&xe)?;
        dv.record(alloc::vec![fm(x)], lhs - delta_v_multiple(table, loops, &xe, &dx));
    }

    Ok(alloc::vec![product, eq3, cartan, eq6, hom, killed, closed, dv])
}

impl<C: Coefficient> ActionTable<C> {
    /// Names used in serialized tables.
    pub fn omega_names(&self) -> Vec<String> {
        (0..=self.n).map(|i| alloc::format!("E{}", 2 * i)).collect()
    }

    pub fn group_names(&self) -> Vec<String> {
        (0..=self.n).map(|j| alloc::format!("e{}", 2 * j + 1)).collect()
    }

    pub fn module_generator_names(&self) -> Vec<String> {
        self.module.generators().iter().map(|g| g.name.to_string()).collect()
    }
}
