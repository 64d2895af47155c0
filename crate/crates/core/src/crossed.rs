//! Crossed products of `C(S)` by `G = Z/l^k` at finite level.
//!
//! Functions on `S x G` are vectors indexed by `x * |G| + a`. Block forms
//! `A_{m,n}` (operators on `C(S)`) are stored in one matrix indexed by
//! `m * |S| + x`. The base point of `S` is `0`.

use rand::Rng;
use serde::Serialize;

use crate::charduals::{analyze_1d, TruncatedGroup};
use crate::error::{Error, Result};
use crate::linalg::algebra::DEFAULT_AMBIENT_LIMIT;
use crate::linalg::{
    algebra_span, center, commutant_with_limit, KMatrix, MatrixAlgebra, NormExponent,
};
use crate::padic::{Field, Padic};
use crate::sample::random_scalar_or_zero;
use crate::spectral::is_orthoprojection;

/// `eta_i(x) = g_i(-x)` for `i` in the dual stabilizer subgroup.
pub fn eta(grp: &TruncatedGroup, i: usize) -> Result<Vec<Padic>> {
    let i = i % grp.order();
    if !grp.in_g0(i) {
        return Err(Error::IndexNotInG0(i));
    }
    Ok((0..grp.s_order())
        .map(|x| grp.zeta_pow(-((i * x) as i64)).clone())
        .collect())
}

/// A function on `S x G`, indexed `[x][a]`.
#[derive(Clone, Debug, PartialEq)]
pub struct CrossedFunction {
    pub values: Vec<Vec<Padic>>,
}

impl CrossedFunction {
    pub fn flatten(&self) -> Vec<Padic> {
        self.values.iter().flatten().cloned().collect()
    }
}

/// The functions `nu_(i,n)(x, a) = eta_i(x) g_n(a)`, `i` in the dual
/// stabilizer, `n` in the dual group; ordered by `i` then `n`.
pub fn nu_basis(grp: &TruncatedGroup) -> Vec<CrossedFunction> {
    let mut out = Vec::new();
    for i in grp.g0() {
        let e = eta(grp, i).expect("index from g0");
        for n in 0..grp.order() {
            let values = (0..grp.s_order())
                .map(|x| {
                    (0..grp.order())
                        .map(|a| &e[x] * grp.character(n, a))
                        .collect()
                })
                .collect();
            out.push(CrossedFunction { values });
        }
    }
    out
}

#[derive(Clone, Debug)]
pub enum OperatorKind {
    /// `F(x, a) -> F(x + a0, a + a0)`.
    U(usize),
    /// `F(x, a) -> F(x, a - a0)`.
    V(usize),
    /// `F(x, a) -> F(x - a, -a)`.
    W,
    /// Multiplication by `phi(x)`.
    L(Vec<Padic>),
    /// Multiplication by `phi(x - a)`.
    M(Vec<Padic>),
}

/// An operator on `C(S x G)` together with its block form.
#[derive(Clone, Debug)]
pub struct CrossedOperator {
    pub matrix: KMatrix,
    pub blocks: KMatrix,
}

/// Fixed change-of-basis data for one group.
#[derive(Clone, Debug)]
pub struct CrossedModel {
    grp: TruncatedGroup,
    /// Columns `delta_y (x) g_n`: block coordinates to point coordinates.
    fourier: KMatrix,
    fourier_inv: KMatrix,
    /// Columns `nu_(i,n)`.
    nu: KMatrix,
    nu_inv: KMatrix,
}

impl CrossedModel {
    pub fn new(grp: &TruncatedGroup) -> CrossedModel {
        let field = grp.field().clone();
        let (s, g) = (grp.s_order(), grp.order());
        let dim = s * g;
        let inv_g = grp.inverse_order();
        let fourier = KMatrix::from_fn(&field, dim, dim, |r, c| {
            let (x, a) = (r / g, r % g);
            let (n, y) = (c / s, c % s);
            if x == y {
                grp.character(n, a).clone()
            } else {
                field.zero()
            }
        });
        let fourier_inv = KMatrix::from_fn(&field, dim, dim, |r, c| {
            let (n, y) = (r / s, r % s);
            let (x, a) = (c / g, c % g);
            if x == y {
                &inv_g * grp.character(n, grp.neg(a))
            } else {
                field.zero()
            }
        });
        let g0 = grp.g0();
        let etas: Vec<Vec<Padic>> = g0.iter().map(|&i| eta(grp, i).expect("g0")).collect();
        let eta_negs: Vec<Vec<Padic>> = g0
            .iter()
            .map(|&i| eta(grp, grp.neg(i)).expect("g0"))
            .collect();
        let nu = KMatrix::from_fn(&field, dim, dim, |r, c| {
            let (x, a) = (r / g, r % g);
            let (ii, n) = (c / g, c % g);
            &etas[ii][x] * grp.character(n, a)
        });
        let inv_dim = field.ratio(1, dim as i64);
        let nu_inv = KMatrix::from_fn(&field, dim, dim, |r, c| {
            let (ii, n) = (r / g, r % g);
            let (x, a) = (c / g, c % g);
            &(&inv_dim * &eta_negs[ii][x]) * grp.character(grp.neg(n), a)
        });
        CrossedModel {
            grp: grp.clone(),
            fourier,
            fourier_inv,
            nu,
            nu_inv,
        }
    }

    pub fn group(&self) -> &TruncatedGroup {
        &self.grp
    }

    pub fn field(&self) -> &Field {
        self.grp.field()
    }

    /// `|S| * |G|`.
    pub fn dim(&self) -> usize {
        self.grp.s_order() * self.grp.order()
    }

    pub fn point(&self, x: usize, a: usize) -> usize {
        x * self.grp.order() + a
    }

    /// Matrix of `F -> F o sigma` for a map `sigma` of `S x G` to itself.
    fn composition(&self, sigma: impl Fn(usize, usize) -> (usize, usize)) -> KMatrix {
        let field = self.field();
        let mut m = KMatrix::zeros(field, self.dim(), self.dim());
        for x in 0..self.grp.s_order() {
            for a in 0..self.grp.order() {
                let (y, b) = sigma(x, a);
                m.set(self.point(x, a), self.point(y, b), field.one());
            }
        }
        m
    }

    fn multiplication(&self, f: impl Fn(usize, usize) -> Padic) -> KMatrix {
        let field = self.field();
        let mut m = KMatrix::zeros(field, self.dim(), self.dim());
        for x in 0..self.grp.s_order() {
            for a in 0..self.grp.order() {
                let i = self.point(x, a);
                m.set(i, i, f(x, a));
            }
        }
        m
    }

    pub fn operator_matrix(&self, kind: &OperatorKind) -> Result<KMatrix> {
        let g = &self.grp;
        let (s, order) = (g.s_order(), g.order());
        let check_phi = |phi: &Vec<Padic>| {
            if phi.len() == s {
                Ok(())
            } else {
                Err(Error::DimensionMismatch(format!(
                    "function on S needs {s} values, got {}",
                    phi.len()
                )))
            }
        };
        Ok(match kind {
            OperatorKind::U(a0) => self.composition(|x, a| (g.act(x, *a0), (a + a0) % order)),
            OperatorKind::V(a0) => self.composition(|x, a| (x, (a + order - a0 % order) % order)),
            OperatorKind::W => self.composition(|x, a| (g.act(x, g.neg(a)), g.neg(a))),
            OperatorKind::L(phi) => {
                check_phi(phi)?;
                self.multiplication(|x, _| phi[x].clone())
            }
            OperatorKind::M(phi) => {
                check_phi(phi)?;
                self.multiplication(|x, a| phi[g.act(x, g.neg(a))].clone())
            }
        })
    }

    pub fn build_operator(&self, kind: &OperatorKind) -> Result<CrossedOperator> {
        let matrix = self.operator_matrix(kind)?;
        let blocks = self.matrix_blocks(&matrix);
        Ok(CrossedOperator { matrix, blocks })
    }

    /// Block form: `A_{m,n}[x][y]` at row `m|S| + x`, column `n|S| + y`.
    pub fn matrix_blocks(&self, m: &KMatrix) -> KMatrix {
        &(&self.fourier_inv * m) * &self.fourier
    }

    pub fn from_blocks(&self, blocks: &KMatrix) -> KMatrix {
        &(&self.fourier * blocks) * &self.fourier_inv
    }

    /// The single block `A_{m,n}` as an `|S| x |S|` matrix.
    pub fn block(&self, blocks: &KMatrix, m: usize, n: usize) -> KMatrix {
        let s = self.grp.s_order();
        KMatrix::from_fn(self.field(), s, s, |x, y| {
            blocks.get(m * s + x, n * s + y).clone()
        })
    }

    /// Builds a block matrix from a rule giving each `|S| x |S|` block.
    pub fn assemble_blocks(&self, mut f: impl FnMut(usize, usize) -> KMatrix) -> KMatrix {
        let (s, g) = (self.grp.s_order(), self.grp.order());
        let mut out = KMatrix::zeros(self.field(), self.dim(), self.dim());
        for m in 0..g {
            for n in 0..g {
                let b = f(m, n);
                for x in 0..s {
                    for y in 0..s {
                        out.set(m * s + x, n * s + y, b.get(x, y).clone());
                    }
                }
            }
        }
        out
    }

    pub fn nu_matrix(&self) -> &KMatrix {
        &self.nu
    }

    /// Matrix of an operator in the `nu` basis.
    pub fn to_nu(&self, m: &KMatrix) -> KMatrix {
        &(&self.nu_inv * m) * &self.nu
    }

    pub fn from_nu(&self, m: &KMatrix) -> KMatrix {
        &(&self.nu * m) * &self.nu_inv
    }

    /// Index of `nu_(i,n)`; `i` must lie in the dual stabilizer.
    pub fn nu_index(&self, i: usize, n: usize) -> usize {
        let step = self.grp.order() / self.grp.s_order();
        (i / step) * self.grp.order() + n
    }

    /// Whether `m - n` lies in the dual stabilizer.
    pub fn admissible(&self, m: usize, n: usize) -> bool {
        self.grp
            .in_g0((m + self.grp.order() - n) % self.grp.order())
    }

    /// Operator with coefficients `b` in the `nu` basis:
    /// `nu_(i,j) -> sum_m b[m][j] nu_(m + i - j, m)`.
    #[allow(clippy::needless_range_loop)]
    pub fn nu_form(&self, b: &[Vec<Padic>]) -> KMatrix {
        let g = self.grp.order();
        let field = self.field();
        let mut out = KMatrix::zeros(field, self.dim(), self.dim());
        for i in self.grp.g0() {
            for j in 0..g {
                for m in 0..g {
                    if !self.admissible(m, j) || b[m][j].is_zero() {
                        continue;
                    }
                    let l = (m + i + g - j) % g;
                    out.set(self.nu_index(l, m), self.nu_index(i, j), b[m][j].clone());
                }
            }
        }
        out
    }

    /// Reads `b` back from a `nu`-basis matrix, checking the full pattern.
    /// Returns `None` if the matrix is not of that form.
    #[allow(clippy::needless_range_loop)]
    pub fn coefficients_from_nu(&self, m: &KMatrix) -> Result<Option<Vec<Vec<Padic>>>> {
        let g = self.grp.order();
        let field = self.field();
        let mut b = vec![vec![field.zero(); g]; g];
        for mm in 0..g {
            for j in 0..g {
                if self.admissible(mm, j) {
                    let l = (mm + g - j) % g;
                    b[mm][j] = m.get(self.nu_index(l, mm), self.nu_index(0, j)).clone();
                }
            }
        }
        Ok(self.nu_form(&b).same_as(m)?.then_some(b))
    }
}

/// Coefficients `b[m][n]`, zero unless `m - n` is in the dual stabilizer;
/// the element has blocks `b[m][n] eta_{m-n}(x)`.
#[derive(Clone, Debug)]
pub struct StructuredCommutantElement {
    pub b: Vec<Vec<Padic>>,
}

impl StructuredCommutantElement {
    pub fn new(model: &CrossedModel, b: Vec<Vec<Padic>>) -> Result<StructuredCommutantElement> {
        let g = model.group().order();
        if b.len() != g || b.iter().any(|r| r.len() != g) {
            return Err(Error::DimensionMismatch(format!(
                "coefficients must be {g}x{g}"
            )));
        }
        for (m, row) in b.iter().enumerate() {
            for (n, v) in row.iter().enumerate() {
                if !model.admissible(m, n) && !v.is_negligible(0)? {
                    return Err(Error::SupportViolation(m, n));
                }
            }
        }
        Ok(StructuredCommutantElement { b })
    }

    pub fn coefficient_matrix(&self, field: &Field) -> KMatrix {
        KMatrix::from_rows(field, self.b.clone())
    }

    /// The operator on `C(S x G)` in the point basis.
    pub fn to_matrix(&self, model: &CrossedModel) -> KMatrix {
        model.from_nu(&model.nu_form(&self.b))
    }

    /// Block form built directly from `psi_{m,n} = b[m][n] eta_{m-n}`.
    pub fn blocks(&self, model: &CrossedModel) -> KMatrix {
        let grp = model.group();
        let g = grp.order();
        model.assemble_blocks(|m, n| {
            let d = (m + g - n) % g;
            match eta(grp, d) {
                Ok(e) if !self.b[m][n].is_zero() => {
                    let vals: Vec<Padic> = e.iter().map(|v| v * &self.b[m][n]).collect();
                    KMatrix::diag(model.field(), &vals)
                }
                _ => KMatrix::zeros(model.field(), grp.s_order(), grp.s_order()),
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IdempotentVerdict {
    pub idempotent: bool,
    pub orthoprojection: bool,
}

/// Coefficient-level test: `B^2 = B` over the admissible support, and
/// orthoprojection iff moreover every `|b| <= 1`.
pub fn idempotent_check(
    elem: &StructuredCommutantElement,
    field: &Field,
) -> Result<IdempotentVerdict> {
    let bm = elem.coefficient_matrix(field);
    let idempotent = bm.is_idempotent()?;
    let bounded = bm.norm()?.norm_le(NormExponent::UNIT);
    Ok(IdempotentVerdict {
        idempotent,
        orthoprojection: idempotent && bounded,
    })
}

/// Same verdict computed on the operator itself.
pub fn idempotent_check_matrix(
    model: &CrossedModel,
    elem: &StructuredCommutantElement,
) -> Result<IdempotentVerdict> {
    let a = elem.to_matrix(model);
    let idempotent = a.is_idempotent()?;
    Ok(IdempotentVerdict {
        idempotent,
        orthoprojection: idempotent && is_orthoprojection(&a)?,
    })
}

/// Indicator functions of the points of `S`.
pub fn indicator_basis(grp: &TruncatedGroup) -> Vec<Vec<Padic>> {
    let f = grp.field();
    (0..grp.s_order())
        .map(|x| {
            (0..grp.s_order())
                .map(|y| if x == y { f.one() } else { f.zero() })
                .collect()
        })
        .collect()
}

/// Generators of the two algebras: `U(a0)` with `L(phi)`, and `V(a0)` with
/// `M(phi)`, over all `a0` and indicator functions `phi`.
pub fn generators(model: &CrossedModel) -> Result<(Vec<KMatrix>, Vec<KMatrix>)> {
    let grp = model.group();
    let mut gi = Vec::new();
    let mut gj = Vec::new();
    for a0 in 0..grp.order() {
        gi.push(model.operator_matrix(&OperatorKind::U(a0))?);
        gj.push(model.operator_matrix(&OperatorKind::V(a0))?);
    }
    for phi in indicator_basis(grp) {
        gi.push(model.operator_matrix(&OperatorKind::L(phi.clone()))?);
        gj.push(model.operator_matrix(&OperatorKind::M(phi))?);
    }
    Ok((gi, gj))
}

#[derive(Clone, Debug)]
pub struct CrossedAlgebras {
    pub gens_i: Vec<KMatrix>,
    pub gens_j: Vec<KMatrix>,
    pub ri: MatrixAlgebra,
    pub rj: MatrixAlgebra,
}

pub fn build_algebras(model: &CrossedModel) -> Result<CrossedAlgebras> {
    let (gens_i, gens_j) = generators(model)?;
    let n = model.dim();
    let ri = algebra_span(model.field(), n, &gens_i)?;
    let rj = algebra_span(model.field(), n, &gens_j)?;
    Ok(CrossedAlgebras {
        gens_i,
        gens_j,
        ri,
        rj,
    })
}

/// Per-check outcome inside a report.
#[derive(Clone, Debug, Serialize)]
pub struct NamedCheck {
    pub name: String,
    pub passed: bool,
}

impl NamedCheck {
    pub fn new(name: impl Into<String>, passed: bool) -> NamedCheck {
        NamedCheck {
            name: name.into(),
            passed,
        }
    }
}

/// Center coefficients `lambda_n` read off a central element.
#[derive(Clone, Debug, Serialize)]
pub struct CentralPattern {
    /// Whether every central basis element has block form `delta_{m,n} lambda_n I`.
    pub diagonal_scalar_blocks: bool,
    /// Whether `lambda_n` agrees across the dual stabilizer for every element.
    pub constant_on_g0: bool,
    /// Whether `lambda_n` is constant on every coset of the dual stabilizer.
    pub constant_on_cosets: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CommutationReport {
    pub dim: usize,
    pub dim_ri: usize,
    pub dim_rj: usize,
    pub dim_commutant_i: usize,
    pub dim_commutant_j: usize,
    pub dim_center: usize,
    pub free: bool,
    pub checks: Vec<NamedCheck>,
    pub central: CentralPattern,
}

impl CommutationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// `lambda_n` values of a central element in block form, or `None` if the
/// blocks are not `delta_{m,n} lambda_n I`.
pub fn central_scalars(model: &CrossedModel, z: &KMatrix) -> Result<Option<Vec<Padic>>> {
    let blocks = model.matrix_blocks(z);
    let grp = model.group();
    let s = grp.s_order();
    let lambdas: Vec<Padic> = (0..grp.order())
        .map(|m| blocks.get(m * s, m * s).clone())
        .collect();
    let rebuilt = model.assemble_blocks(|a, b| {
        if a == b {
            KMatrix::identity(model.field(), s).scale(&lambdas[a])
        } else {
            KMatrix::zeros(model.field(), s, s)
        }
    });
    Ok(rebuilt.same_as(&blocks)?.then_some(lambdas))
}

/// Checks the commutation theorem at finite level: both commutant
/// equalities, the double commutant equalities, the spatial isomorphism by
/// `W`, and the shape of the center.
pub fn verify_commutation_theorem(model: &CrossedModel) -> Result<CommutationReport> {
    verify_commutation_theorem_with_limit(model, DEFAULT_AMBIENT_LIMIT)
}

/// As [`verify_commutation_theorem`] with an explicit cap on the ambient
/// dimension of the commutant solves.
pub fn verify_commutation_theorem_with_limit(
    model: &CrossedModel,
    limit: usize,
) -> Result<CommutationReport> {
    let field = model.field();
    let n = model.dim();
    let grp = model.group();
    let alg = build_algebras(model)?;
    let comm_i = commutant_with_limit(field, n, &alg.gens_i, limit)?;
    let comm_j = commutant_with_limit(field, n, &alg.gens_j, limit)?;
    let mut checks = vec![
        NamedCheck::new("J generators lie in I'", {
            let mut ok = true;
            for g in &alg.gens_j {
                ok &= comm_i.contains(g)?;
            }
            ok
        }),
        NamedCheck::new("R(J) = I'", alg.rj.same_span(&comm_i)?),
        NamedCheck::new("R(I) = J'", alg.ri.same_span(&comm_j)?),
    ];
    // R(I)' = I', so R(I)'' is the commutant of I'
    let ri_dd = commutant_with_limit(field, n, comm_i.basis(), limit)?;
    let rj_dd = commutant_with_limit(field, n, comm_j.basis(), limit)?;
    checks.push(NamedCheck::new("R(I) = R(I)''", alg.ri.same_span(&ri_dd)?));
    checks.push(NamedCheck::new("R(J) = R(J)''", alg.rj.same_span(&rj_dd)?));
    let w = model.operator_matrix(&OperatorKind::W)?;
    checks.push(NamedCheck::new(
        "W R(I) W = R(J)",
        alg.ri.conjugate(&w, &w)?.same_span(&alg.rj)?,
    ));
    let z = center(&alg.ri)?;
    let mut diagonal_scalar_blocks = true;
    let mut constant_on_g0 = true;
    let mut constant_on_cosets = true;
    let g0 = grp.g0();
    for zb in z.basis() {
        match central_scalars(model, zb)? {
            None => diagonal_scalar_blocks = false,
            Some(lambdas) => {
                for &i in &g0 {
                    constant_on_g0 &= lambdas[i].same_as(&lambdas[0])?;
                }
                for c in 0..grp.order() {
                    for &i in &g0 {
                        constant_on_cosets &=
                            lambdas[(c + i) % grp.order()].same_as(&lambdas[c])?;
                    }
                }
            }
        }
    }
    if grp.is_free() {
        checks.push(NamedCheck::new("center is scalars", z.dim() == 1));
    } else {
        checks.push(NamedCheck::new(
            "central elements are delta_{m,n} lambda_n I",
            diagonal_scalar_blocks,
        ));
        checks.push(NamedCheck::new(
            "lambda_n constant on dual stabilizer",
            constant_on_g0,
        ));
    }
    Ok(CommutationReport {
        dim: n,
        dim_ri: alg.ri.dim(),
        dim_rj: alg.rj.dim(),
        dim_commutant_i: comm_i.dim(),
        dim_commutant_j: comm_j.dim(),
        dim_center: z.dim(),
        free: grp.is_free(),
        checks,
        central: CentralPattern {
            diagonal_scalar_blocks,
            constant_on_g0,
            constant_on_cosets,
        },
    })
}

/// `c_m(x)` with `psi(x - a) = sum_m c_m(x) g_m(a)`; indexed `[m][x]`.
pub fn shifted_coefficients(grp: &TruncatedGroup, psi: &[Padic]) -> Vec<Vec<Padic>> {
    let per_x: Vec<Vec<Padic>> = (0..grp.s_order())
        .map(|x| {
            let row: Vec<Padic> = (0..grp.order())
                .map(|a| psi[grp.act(x, grp.neg(a))].clone())
                .collect();
            analyze_1d(grp, &row)
        })
        .collect();
    (0..grp.order())
        .map(|m| per_x.iter().map(|c| c[m].clone()).collect())
        .collect()
}

/// Shift `f -> f(. + a0)` on `C(S)`.
pub fn shift_on_s(grp: &TruncatedGroup, a0: usize) -> KMatrix {
    let f = grp.field();
    let s = grp.s_order();
    KMatrix::from_fn(f, s, s, |x, y| {
        if grp.act(x, a0) == y {
            f.one()
        } else {
            f.zero()
        }
    })
}

/// Checks the operator identities (involution and conjugation by `W`, and
/// the block forms of `U`, `V`, `M`) for every group element and every
/// function in `phis`.
pub fn verify_operator_identities(
    model: &CrossedModel,
    phis: &[Vec<Padic>],
) -> Result<Vec<NamedCheck>> {
    let grp = model.group();
    let field = model.field();
    let s = grp.s_order();
    let g = grp.order();
    let w = model.operator_matrix(&OperatorKind::W)?;
    let id = KMatrix::identity(field, model.dim());
    let mut out = vec![NamedCheck::new("W W = I", (&w * &w).same_as(&id)?)];
    let mut wuw = true;
    let mut u_blocks = true;
    let mut v_blocks = true;
    for a0 in 0..g {
        let u = model.build_operator(&OperatorKind::U(a0))?;
        let v = model.build_operator(&OperatorKind::V(a0))?;
        wuw &= (&(&w * &u.matrix) * &w).same_as(&v.matrix)?;
        let shift = shift_on_s(grp, a0);
        let expected_u = model.assemble_blocks(|m, n| {
            if m == n {
                shift.scale(grp.character(n, a0))
            } else {
                KMatrix::zeros(field, s, s)
            }
        });
        u_blocks &= u.blocks.same_as(&expected_u)?;
        let expected_v = model.assemble_blocks(|m, n| {
            if m == n {
                KMatrix::identity(field, s).scale(grp.character(n, grp.neg(a0)))
            } else {
                KMatrix::zeros(field, s, s)
            }
        });
        v_blocks &= v.blocks.same_as(&expected_v)?;
    }
    out.push(NamedCheck::new("W U(a0) W = V(a0)", wuw));
    out.push(NamedCheck::new("U(a0) blocks delta g_n(a0) U_a0", u_blocks));
    out.push(NamedCheck::new("V(a0) blocks delta g_n(-a0)", v_blocks));
    let mut wlw = true;
    let mut m_blocks = true;
    let mut coeff_shape = true;
    for phi in phis {
        let l = model.operator_matrix(&OperatorKind::L(phi.clone()))?;
        let m_op = model.build_operator(&OperatorKind::M(phi.clone()))?;
        wlw &= (&(&w * &l) * &w).same_as(&m_op.matrix)?;
        let c = shifted_coefficients(grp, phi);
        let expected = model.assemble_blocks(|m, n| KMatrix::diag(field, &c[(m + g - n) % g]));
        m_blocks &= m_op.blocks.same_as(&expected)?;
        // c_i(x) = c_i(0) eta_i(x), and c_i = 0 off the dual stabilizer
        for (i, ci) in c.iter().enumerate() {
            match eta(grp, i) {
                Ok(e) => {
                    for x in 0..s {
                        coeff_shape &= ci[x].same_as(&(&ci[0] * &e[x]))?;
                    }
                }
                Err(_) => {
                    for v in ci {
                        coeff_shape &= v.is_negligible(0)?;
                    }
                }
            }
        }
    }
    out.push(NamedCheck::new("W L(phi) W = M(phi)", wlw));
    out.push(NamedCheck::new(
        "M(phi) blocks multiply by c_{m-n}",
        m_blocks,
    ));
    out.push(NamedCheck::new("c_i = c_i(0) eta_i", coeff_shape));
    let mut eta_blocks = true;
    for t in grp.g0() {
        let e = eta(grp, t)?;
        let m_op = model.build_operator(&OperatorKind::M(e.clone()))?;
        let expected = model.assemble_blocks(|m, n| {
            if (m + g - n) % g == t {
                KMatrix::diag(field, &e)
            } else {
                KMatrix::zeros(field, s, s)
            }
        });
        eta_blocks &= m_op.blocks.same_as(&expected)?;
    }
    out.push(NamedCheck::new("M(eta_t) blocks on m - n = t", eta_blocks));
    Ok(out)
}

/// Reads the structure of an element of `I'`: every block must be
/// multiplication by `psi_{m,n}`, covariant under the action, and equal to
/// `b[m][n] eta_{m-n}` (zero off the admissible support).
#[allow(clippy::needless_range_loop)]
pub fn structure_of_commutant_element(
    model: &CrossedModel,
    a: &KMatrix,
) -> Result<Option<StructuredCommutantElement>> {
    let grp = model.group();
    let g = grp.order();
    let s = grp.s_order();
    let blocks = model.matrix_blocks(a);
    let field = model.field();
    let mut b = vec![vec![field.zero(); g]; g];
    for m in 0..g {
        for n in 0..g {
            let blk = model.block(&blocks, m, n);
            let psi: Vec<Padic> = (0..s).map(|x| blk.get(x, x).clone()).collect();
            if !KMatrix::diag(field, &psi).same_as(&blk)? {
                return Ok(None);
            }
            for a0 in 0..g {
                let factor = grp.character(m, grp.neg(a0)) * grp.character(n, a0);
                for x in 0..s {
                    if !psi[grp.act(x, a0)].same_as(&(&factor * &psi[x]))? {
                        return Ok(None);
                    }
                }
            }
            let d = (m + g - n) % g;
            match eta(grp, d) {
                Ok(e) => {
                    for x in 0..s {
                        if !psi[x].same_as(&(&psi[0] * &e[x]))? {
                            return Ok(None);
                        }
                    }
                    b[m][n] = psi[0].clone();
                }
                Err(_) => {
                    for v in &psi {
                        if !v.is_negligible(0)? {
                            return Ok(None);
                        }
                    }
                }
            }
        }
    }
    Ok(Some(StructuredCommutantElement { b }))
}

/// Random element with coefficients of valuation in `-1..=1` on the
/// admissible support.
pub fn random_structured_element<R: Rng + ?Sized>(
    model: &CrossedModel,
    rng: &mut R,
) -> Result<StructuredCommutantElement> {
    let g = model.group().order();
    let field = model.field();
    let b = (0..g)
        .map(|m| {
            (0..g)
                .map(|n| {
                    if model.admissible(m, n) {
                        random_scalar_or_zero(field, rng, -1, 1, 0.25)
                    } else {
                        field.zero()
                    }
                })
                .collect()
        })
        .collect();
    StructuredCommutantElement::new(model, b)
}

/// Random idempotent `Q D Q^-1` with `Q` invertible on the admissible
/// support and `D` a 0/1 diagonal.
pub fn random_structured_idempotent<R: Rng + ?Sized>(
    model: &CrossedModel,
    rng: &mut R,
) -> Result<StructuredCommutantElement> {
    let field = model.field();
    let g = model.group().order();
    loop {
        let q = random_structured_element(model, rng)?.coefficient_matrix(field);
        let Ok(q_inv) = q.inverse() else { continue };
        let d: Vec<Padic> = (0..g).map(|_| field.int(rng.gen_range(0..2))).collect();
        let b = &(&q * &KMatrix::diag(field, &d)) * &q_inv;
        return StructuredCommutantElement::new(model, b.to_rows());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(p: u64, l: u64, k: u32, j: u32) -> CrossedModel {
        let f = Field::new(p, 24).unwrap();
        CrossedModel::new(&TruncatedGroup::new(&f, l, k, j).unwrap())
    }

    #[test]
    fn eta_examples() {
        let m = model(3, 2, 1, 1);
        let f = m.field().clone();
        assert_eq!(eta(m.group(), 0).unwrap(), vec![f.one(), f.one()]);
        assert_eq!(eta(m.group(), 1).unwrap(), vec![f.one(), f.int(-1)]);
        let m = model(5, 2, 2, 1);
        assert_eq!(eta(m.group(), 1).unwrap_err(), Error::IndexNotInG0(1));
        assert_eq!(nu_basis(m.group()).len(), 8);
    }

    #[test]
    fn change_of_basis_is_inverse() {
        let m = model(5, 2, 2, 1);
        let id = KMatrix::identity(m.field(), m.dim());
        assert!((&m.fourier * &m.fourier_inv).same_as(&id).unwrap());
        assert!((&m.nu * &m.nu_inv).same_as(&id).unwrap());
    }

    #[test]
    fn operator_identities_small() {
        let m = model(3, 2, 1, 1);
        let mut phis = indicator_basis(m.group());
        phis.push(eta(m.group(), 1).unwrap());
        for c in verify_operator_identities(&m, &phis).unwrap() {
            assert!(c.passed, "{}", c.name);
        }
    }

    #[test]
    fn commutation_small_free() {
        let m = model(3, 2, 1, 1);
        let r = verify_commutation_theorem(&m).unwrap();
        assert_eq!(r.dim_ri, 4);
        assert_eq!(r.dim_center, 1);
        assert!(r.all_passed(), "{:?}", r.checks);
    }

    #[test]
    fn structured_roundtrip() {
        let m = model(3, 2, 1, 1);
        let f = m.field().clone();
        let b = vec![vec![f.int(1), f.int(2)], vec![f.int(0), f.int(5)]];
        let e = StructuredCommutantElement::new(&m, b).unwrap();
        let a = e.to_matrix(&m);
        assert!(m.matrix_blocks(&a).same_as(&e.blocks(&m)).unwrap());
        let back = structure_of_commutant_element(&m, &a).unwrap().unwrap();
        assert!(back
            .coefficient_matrix(&f)
            .same_as(&e.coefficient_matrix(&f))
            .unwrap());
        let nu = m.to_nu(&a);
        let coeffs = m.coefficients_from_nu(&nu).unwrap().unwrap();
        assert_eq!(coeffs[1][1], f.int(5));
    }

    #[test]
    fn idempotent_with_large_coefficient() {
        let m = model(3, 2, 1, 1);
        let f = m.field().clone();
        let b = vec![vec![f.one(), f.ratio(1, 3)], vec![f.zero(), f.zero()]];
        let e = StructuredCommutantElement::new(&m, b).unwrap();
        let v = idempotent_check(&e, &f).unwrap();
        assert!(v.idempotent && !v.orthoprojection);
        assert_eq!(idempotent_check_matrix(&m, &e).unwrap(), v);
    }
}
