use crate::error::{Error, Result};
use crate::fock::{FockSpace, FockVector};
use crate::lattice::CosetLabel;
use crate::scalars::{frac, int, Cyclotomic};
use crate::series::{TruncSeries, Window};

use super::engine::Intertwiner;

/// An intertwining operator of type `(V_{beta+gamma+L}; V_{beta+L}, V_{gamma+L})`,
/// given as `scale * Y_beta` on canonical representatives.
#[derive(Clone, Debug)]
pub struct IntertwinerSpec {
    pub beta: CosetLabel,
    pub gamma: CosetLabel,
    pub scale: Cyclotomic,
}

impl IntertwinerSpec {
    /// `scale * Y_beta` restricted to `V_{beta+L} (x) V_{gamma+L}`.
    pub fn raw(beta: &CosetLabel, gamma: &CosetLabel, scale: Cyclotomic) -> Self {
        IntertwinerSpec {
            beta: beta.clone(),
            gamma: gamma.clone(),
            scale,
        }
    }

    /// `scale * e^{-pi i <beta,gamma>} eps(gamma,beta)^{-1} Y_beta`, the generator
    /// of the integral intertwining operators times `scale`.
    pub fn normalized(fs: &FockSpace, beta: &CosetLabel, gamma: &CosetLabel, scale: &Cyclotomic) -> Self {
        let l = fs.lattice();
        let b = beta.rep();
        let g = gamma.rep();
        let r = -l.pair(b, g) / int(2) - l.epsilon_exponent_unchecked(g, b);
        let phase = l.root(&frac(&r)).expect("phases fit the field");
        Self::raw(beta, gamma, &phase * scale)
    }

    pub fn target(&self, fs: &FockSpace) -> CosetLabel {
        fs.lattice().coset_unchecked(&(self.beta.rep() + self.gamma.rep()))
    }

    pub fn build(&self, fs: &FockSpace) -> Result<Intertwiner> {
        Ok(Intertwiner::new(fs, self.beta.rep())?.with_scale(&self.scale))
    }

    fn check_inputs(&self, u: &FockVector, v: &FockVector) -> Result<()> {
        if u.coset() != &self.beta || v.coset() != &self.gamma {
            return Err(Error::CosetMismatch(format!(
                "operator acts on {} (x) {}, inputs lie in {} (x) {}",
                self.beta,
                self.gamma,
                u.coset(),
                v.coset()
            )));
        }
        Ok(())
    }
}

/// `spec.scale * Y_beta(u,x)v` over the window.
pub fn intertwiner(fs: &FockSpace, spec: &IntertwinerSpec, u: &FockVector, v: &FockVector, window: Window) -> Result<TruncSeries> {
    spec.check_inputs(u, v)?;
    spec.build(fs)?.series(u, v, window)
}

/// `Y(u,x)v` for `u` in `V_L`, through the descendant recursion.
pub fn vertex_descendant(fs: &FockSpace, u: &FockVector, v: &FockVector, window: Window) -> Result<TruncSeries> {
    if !u.coset().is_zero() {
        return Err(Error::CosetMismatch(format!("vertex operators need u in V_L, got {}", u.coset())));
    }
    Intertwiner::vertex(fs).series(u, v, window)
}
