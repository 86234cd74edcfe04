use alloc::vec::Vec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{FormMatrix, IndefiniteError};
use crate::linalg::Scalar;

/// Block sizes of a parabolic trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParabolicConfig {
    pub q_iso: usize,
    pub p: usize,
    pub n3: usize,
}

/// The standard sweep of `(q, p, n₃)`.
pub const PARABOLIC_CONFIGS: [ParabolicConfig; 5] = [
    ParabolicConfig { q_iso: 1, p: 1, n3: 4 },
    ParabolicConfig { q_iso: 1, p: 2, n3: 6 },
    ParabolicConfig { q_iso: 2, p: 2, n3: 6 },
    ParabolicConfig { q_iso: 2, p: 3, n3: 8 },
    ParabolicConfig { q_iso: 2, p: 4, n3: 12 },
];

/// Worst residuals of one random instance. All are max-entry norms except
/// `levi_norm`, which compares Frobenius norms.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TrialResiduals {
    /// `‖g*Qg - Q‖` for two random elements, their product and an inverse.
    pub form: f64,
    /// `‖n · levi - g‖` for both elements.
    pub reconstruction: f64,
    /// `‖π(g₁g₂) - π(g₁)π(g₂)‖` for the Levi projection `π`.
    pub projection: f64,
    /// Distance from the identity of a commutator of two commutators.
    pub double_commutator: f64,
    /// B-block of a commutator, which vanishes.
    pub commutator_b: f64,
    /// `‖B(n₁n₂) - B₁ - B₂‖` and agreement of the block law with matrix
    /// multiplication.
    pub nil_law: f64,
    /// Agreement of Levi conjugation with `(MYM*, RBM*)`.
    pub levi_blocks: f64,
    /// Change of `‖Y‖_F` and `‖B‖_F` under conjugation by a compact Levi
    /// element.
    pub levi_norm: f64,
    /// Failure to stabilize `span{e₁,…,e_q}` of a product or inverse.
    pub closure: f64,
}

/// Bounds a trial must meet, in field order of [`TrialResiduals`].
pub const TRIAL_BOUNDS: TrialResiduals = TrialResiduals {
    form: 1e-10,
    reconstruction: 1e-10,
    projection: 1e-9,
    double_commutator: 1e-12,
    commutator_b: 1e-10,
    nil_law: 1e-10,
    levi_blocks: 1e-10,
    levi_norm: 1e-10,
    closure: 1e-9,
};

impl TrialResiduals {
    /// Names and values, in declaration order.
    pub fn entries(&self) -> [(&'static str, f64); 9] {
        [
            ("form", self.form),
            ("reconstruction", self.reconstruction),
            ("projection", self.projection),
            ("double_commutator", self.double_commutator),
            ("commutator_b", self.commutator_b),
            ("nil_law", self.nil_law),
            ("levi_blocks", self.levi_blocks),
            ("levi_norm", self.levi_norm),
            ("closure", self.closure),
        ]
    }

    /// Names of the residuals above [`TRIAL_BOUNDS`].
    pub fn violations(&self) -> Vec<&'static str> {
        self.entries()
            .iter()
            .zip(TRIAL_BOUNDS.entries())
            .filter(|((_, v), (_, b))| !(v <= b))
            .map(|((name, _), _)| *name)
            .collect()
    }

    pub fn passes(&self) -> bool {
        self.violations().is_empty()
    }

    pub fn max(self, o: TrialResiduals) -> TrialResiduals {
        TrialResiduals {
            form: self.form.max(o.form),
            reconstruction: self.reconstruction.max(o.reconstruction),
            projection: self.projection.max(o.projection),
            double_commutator: self.double_commutator.max(o.double_commutator),
            commutator_b: self.commutator_b.max(o.commutator_b),
            nil_law: self.nil_law.max(o.nil_law),
            levi_blocks: self.levi_blocks.max(o.levi_blocks),
            levi_norm: self.levi_norm.max(o.levi_norm),
            closure: self.closure.max(o.closure),
        }
    }
}

/// One random instance, drawn from ChaCha8 seeded with `seed` on stream
/// `index`, so trials are independent of evaluation order.
pub fn run_trial<T: Scalar>(config: ParabolicConfig, seed: u64, index: u64) -> Result<TrialResiduals, IndefiniteError> {
    let form = FormMatrix::<T>::standard(config.q_iso, config.p, config.n3)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let g1 = form.random_parabolic(&mut rng)?;
    let g2 = form.random_parabolic(&mut rng)?;
    let product = g1.matrix() * g2.matrix();
    let inverse = g1.matrix().inverse().expect("parabolic elements are invertible");
    let mut out = TrialResiduals::default();

    for g in [g1.matrix(), g2.matrix(), &product, &inverse] {
        out.form = out.form.max(form.preserves_form(g)?);
    }
    let q = form.q_iso();
    for g in [&product, &inverse] {
        let leak = g.block(q, 0, q, q).max_abs().max(g.block(2 * q, 0, form.n3(), q).max_abs());
        out.closure = out.closure.max(leak);
    }

    for g in [&g1, &g2] {
        let (n, levi) = form.decompose(g);
        let rebuilt = &form.nil_matrix(&n) * &form.levi_matrix(&levi.m, &levi.r)?;
        out.reconstruction = out.reconstruction.max(rebuilt.max_abs_diff(g.matrix()));
    }
    let split = &form.project(g1.matrix()) * &form.project(g2.matrix());
    out.projection = form.project(&product).max_abs_diff(&split);

    let nils: [_; 4] = core::array::from_fn(|_| form.random_nil(&mut rng));
    let c1 = form.nil_commutator(&nils[0], &nils[1]);
    let c2 = form.nil_commutator(&nils[2], &nils[3]);
    out.commutator_b = c1.b.max_abs().max(c2.b.max_abs());
    let cc = form.nil_commutator(&c1, &c2);
    out.double_commutator = cc.y.max_abs().max(cc.b.max_abs());

    let law = form.nil_compose(&nils[0], &nils[1]);
    let by_matrix = form.nil_from_matrix(&(&form.nil_matrix(&nils[0]) * &form.nil_matrix(&nils[1])));
    let b_sum = &nils[0].b + &nils[1].b;
    out.nil_law = law.b.max_abs_diff(&b_sum).max(law.y.max_abs_diff(&by_matrix.y)).max(law.b.max_abs_diff(&by_matrix.b));

    let m = form.random_levi_m(&mut rng);
    let r = form.random_r(&mut rng);
    let conj = form.conjugate_by_levi(&nils[0], &m, &r)?;
    let ms = m.adjoint();
    let want_y = &(&m * &nils[0].y) * &ms;
    let want_b = &(&r * &nils[0].b) * &ms;
    out.levi_blocks = conj.y.max_abs_diff(&want_y).max(conj.b.max_abs_diff(&want_b));

    let u = FormMatrix::<T>::random_unitary(q, &mut rng);
    let k = form.random_compact_r(&mut rng);
    let conj = form.conjugate_by_levi(&nils[1], &u, &k)?;
    let dy = (conj.y.frobenius_norm() - nils[1].y.frobenius_norm()).abs();
    let db = (conj.b.frobenius_norm() - nils[1].b.frobenius_norm()).abs();
    out.levi_norm = dy.max(db);
    Ok(out)
}
