//! Domain types: atom geometry, slit apertures, the orbit spin register,
//! per-particle records, and run-level aggregates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of 1-degree screen bins, covering [-90°, +90°).
pub const SCREEN_BINS: usize = 180;

/// Two-valued spin carried by each orbit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Spin {
    Spin1,
    Spin2,
}

impl Spin {
    /// The opposite spin value (involution).
    pub fn other(self) -> Spin {
        match self {
            Spin::Spin1 => Spin::Spin2,
            Spin::Spin2 => Spin::Spin1,
        }
    }
}

/// Which slit a registered particle came through.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SlitTag {
    Slit1,
    Slit2,
}

impl SlitTag {
    /// The spin value whose name matches this slit's name.
    pub fn matching_spin(self) -> Spin {
        match self {
            SlitTag::Slit1 => Spin::Spin1,
            SlitTag::Slit2 => Spin::Spin2,
        }
    }
}

/// Scattering side, realized as the sign in `angle = sign * arcsin(p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Initial assignment of spins to orbits, innermost first.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpinPattern {
    /// Orbit 1 gets Spin1, orbit 2 gets Spin2, and so on.
    #[default]
    Alternating,
    AllSpin1,
    AllSpin2,
}

impl SpinPattern {
    /// Initial spin of orbit `k` (1-based).
    pub fn spin_for(self, k: usize) -> Spin {
        match self {
            SpinPattern::Alternating => {
                if k % 2 == 1 {
                    Spin::Spin1
                } else {
                    Spin::Spin2
                }
            }
            SpinPattern::AllSpin1 => Spin::Spin1,
            SpinPattern::AllSpin2 => Spin::Spin2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SpinPattern::Alternating => "alternating",
            SpinPattern::AllSpin1 => "all1",
            SpinPattern::AllSpin2 => "all2",
        }
    }

    pub fn parse(s: &str) -> Option<SpinPattern> {
        match s {
            "alternating" => Some(SpinPattern::Alternating),
            "all1" => Some(SpinPattern::AllSpin1),
            "all2" => Some(SpinPattern::AllSpin2),
            _ => None,
        }
    }
}

/// Vertical interval gating one slit. Endpoint ownership is fixed by the
/// slit: slit 1 takes (lo, hi], slit 2 takes [lo, hi), and an ordinate equal
/// to both slit 1's `lo` and slit 2's `hi` (the shared edge, 0 by default)
/// belongs to slit 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aperture {
    pub lo: f64,
    pub hi: f64,
}

/// Atom, slit, and screen geometry plus the initial spin pattern.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub atom_radius: f64,
    pub n_orbits: usize,
    pub slit1_aperture: Aperture,
    pub slit2_aperture: Aperture,
    pub initial_spin_pattern: SpinPattern,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            atom_radius: 1.0,
            n_orbits: 10,
            slit1_aperture: Aperture { lo: 0.0, hi: 1.0 },
            slit2_aperture: Aperture { lo: -1.0, hi: 0.0 },
            initial_spin_pattern: SpinPattern::Alternating,
        }
    }
}

impl ModelParams {
    /// Distance between consecutive orbits, derived so that
    /// `orbit_spacing * n_orbits` is the atom radius.
    pub fn orbit_spacing(&self) -> f64 {
        self.atom_radius / self.n_orbits as f64
    }

    /// Radius of orbit `k` (1-based): r_k = k * spacing.
    pub fn orbit_radius(&self, k: usize) -> f64 {
        k as f64 * self.orbit_spacing()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.atom_radius.is_finite() && self.atom_radius > 0.0) {
            return Err(Error::InvalidParam(format!(
                "atom_radius must be finite and positive, got {}",
                self.atom_radius
            )));
        }
        if self.n_orbits == 0 {
            return Err(Error::InvalidParam("n_orbits must be at least 1".into()));
        }
        for (name, a) in [("slit1", self.slit1_aperture), ("slit2", self.slit2_aperture)] {
            if !(a.lo.is_finite() && a.hi.is_finite() && a.lo < a.hi) {
                return Err(Error::InvalidParam(format!(
                    "{name} aperture must satisfy lo < hi with finite bounds, got [{}, {}]",
                    a.lo, a.hi
                )));
            }
            if a.lo < -self.atom_radius || a.hi > self.atom_radius {
                return Err(Error::InvalidParam(format!(
                    "{name} aperture must lie within [-{r}, {r}]",
                    r = self.atom_radius
                )));
            }
        }
        if self.slit1_aperture.lo.max(self.slit2_aperture.lo)
            < self.slit1_aperture.hi.min(self.slit2_aperture.hi)
        {
            return Err(Error::InvalidParam("slit apertures must be disjoint".into()));
        }
        Ok(())
    }

    /// Maps an emission ordinate to the slit whose aperture contains it,
    /// independent of which slits a context keeps open. `None` means the
    /// ordinate lies outside both apertures.
    pub fn classify_ordinate(&self, y: f64) -> Option<SlitTag> {
        // Shared edge between the apertures belongs to slit 1 (0 by default).
        if y == self.slit1_aperture.lo && y == self.slit2_aperture.hi {
            return Some(SlitTag::Slit1);
        }
        if y > self.slit1_aperture.lo && y <= self.slit1_aperture.hi {
            return Some(SlitTag::Slit1);
        }
        if y >= self.slit2_aperture.lo && y < self.slit2_aperture.hi {
            return Some(SlitTag::Slit2);
        }
        None
    }
}

/// Finds the orbit nearest to a radial ordinate.
///
/// Returns the 1-based orbit index minimizing |rho - r_k| and that distance.
/// Ties go to the smaller index; values beyond the atom radius resolve to the
/// outermost orbit.
pub fn nearest_orbit(rho: f64, params: &ModelParams) -> (usize, f64) {
    debug_assert!(rho.is_finite() && rho >= 0.0);
    let spacing = params.orbit_spacing();
    let n = params.n_orbits;
    let k_lo = ((rho / spacing).floor() as isize).clamp(1, n as isize) as usize;
    let k_hi = (k_lo + 1).min(n);
    let d_lo = (rho - params.orbit_radius(k_lo)).abs();
    let d_hi = (rho - params.orbit_radius(k_hi)).abs();
    if d_lo <= d_hi {
        (k_lo, d_lo)
    } else {
        (k_hi, d_hi)
    }
}

/// Mutable per-orbit spins with flip bookkeeping; the model's contextual
/// memory. Index `k` is 1-based to match orbit numbering.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRegister {
    spins: Vec<Spin>,
    flip_counts: Vec<u64>,
}

impl OrbitRegister {
    pub fn new(params: &ModelParams) -> OrbitRegister {
        let spins = (1..=params.n_orbits)
            .map(|k| params.initial_spin_pattern.spin_for(k))
            .collect();
        OrbitRegister { spins, flip_counts: vec![0; params.n_orbits] }
    }

    pub fn n_orbits(&self) -> usize {
        self.spins.len()
    }

    pub fn spin(&self, k: usize) -> Spin {
        assert!((1..=self.spins.len()).contains(&k), "orbit index {k} out of range");
        self.spins[k - 1]
    }

    pub fn flip_count(&self, k: usize) -> u64 {
        assert!((1..=self.spins.len()).contains(&k), "orbit index {k} out of range");
        self.flip_counts[k - 1]
    }

    /// Toggles orbit `k` to the opposite spin. Out-of-range indices are a
    /// caller bug and panic.
    pub fn flip(&mut self, k: usize) {
        assert!((1..=self.spins.len()).contains(&k), "orbit index {k} out of range");
        self.spins[k - 1] = self.spins[k - 1].other();
        self.flip_counts[k - 1] += 1;
    }

    pub fn spins(&self) -> &[Spin] {
        &self.spins
    }

    pub fn total_flips(&self) -> u64 {
        self.flip_counts.iter().sum()
    }
}

/// The four experimental protocols.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExperimentContext {
    /// Only slit 1 open; lower-half emissions are absorbed.
    S1Only,
    /// Only slit 2 open; upper-half emissions are absorbed.
    S2Only,
    /// Both slits open, particles arrive in random order.
    BothRandom,
    /// Both slits used, but all slit-1 particles come first.
    SequentialHalves,
}

impl ExperimentContext {
    pub fn slit_open(self, slit: SlitTag) -> bool {
        !matches!(
            (self, slit),
            (ExperimentContext::S1Only, SlitTag::Slit2)
                | (ExperimentContext::S2Only, SlitTag::Slit1)
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentContext::S1Only => "s1",
            ExperimentContext::S2Only => "s2",
            ExperimentContext::BothRandom => "both",
            ExperimentContext::SequentialHalves => "sequential",
        }
    }

    pub fn parse(s: &str) -> Option<ExperimentContext> {
        match s {
            "s1" => Some(ExperimentContext::S1Only),
            "s2" => Some(ExperimentContext::S2Only),
            "both" => Some(ExperimentContext::BothRandom),
            "sequential" => Some(ExperimentContext::SequentialHalves),
            _ => None,
        }
    }
}

impl std::fmt::Display for ExperimentContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which population a histogram counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HistogramTag {
    Slit1,
    Slit2,
    Total,
}

/// 180 one-degree angular bins; bin `b` covers [b°, (b+1)°) for b in -90..=89.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Histogram {
    pub tag: HistogramTag,
    bins: Vec<u64>,
}

impl Histogram {
    pub fn new(tag: HistogramTag) -> Histogram {
        Histogram { tag, bins: vec![0; SCREEN_BINS] }
    }

    fn index(bin: i32) -> usize {
        assert!((-90..=89).contains(&bin), "screen bin {bin} out of range");
        (bin + 90) as usize
    }

    pub fn increment(&mut self, bin: i32) {
        self.bins[Self::index(bin)] += 1;
    }

    pub fn count(&self, bin: i32) -> u64 {
        self.bins[Self::index(bin)]
    }

    /// Counts in bin order, index 0 holding bin -90.
    pub fn counts(&self) -> &[u64] {
        &self.bins
    }

    pub fn total(&self) -> u64 {
        self.bins.iter().sum()
    }

    /// Element-wise sum carrying the given tag.
    pub fn sum_of(tag: HistogramTag, a: &Histogram, b: &Histogram) -> Histogram {
        let bins = a.bins.iter().zip(&b.bins).map(|(x, y)| x + y).collect();
        Histogram { tag, bins }
    }

    /// Reflection about 0°: bin b swaps with bin -(b+1).
    pub fn mirrored(&self) -> Histogram {
        let mut bins = self.bins.clone();
        bins.reverse();
        Histogram { tag: self.tag, bins }
    }

    pub fn has_expected_len(&self) -> bool {
        self.bins.len() == SCREEN_BINS
    }
}

/// Everything known about a particle that made it past a slit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Flight {
    pub slit: SlitTag,
    pub nearest_orbit: usize,
    pub displaced: bool,
    /// Distance to the nearest orbit before interference, absolute units.
    pub displacement_before: f64,
    /// Distance after; equals `displacement_before` when not displaced.
    pub displacement_after: f64,
    pub scatter_sign: Sign,
    /// Scattering angle, radians in [-pi/2, +pi/2].
    pub angle: f64,
    pub screen_bin: i32,
}

/// Outcome of one emission.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum ParticleFate {
    /// Absorbed at a closed slit; no angle, no screen bin.
    Blocked,
    Registered(Flight),
}

/// One particle's full trajectory data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParticleRecord {
    pub emission_ordinate: f64,
    pub fate: ParticleFate,
}

/// Persisted unit of output for one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub params: ModelParams,
    pub context: ExperimentContext,
    pub seed: u64,
    /// Identity of the pseudorandom generator and sub-seeding scheme.
    pub rng_algorithm: String,
    pub n_emitted: u64,
    pub n_blocked: u64,
    pub n_registered: u64,
    pub n_displaced: u64,
    pub slit1: Histogram,
    pub slit2: Histogram,
    pub total: Histogram,
    pub final_register: OrbitRegister,
}

impl RunRecord {
    /// Structural invariants; also guards records deserialized from disk.
    pub fn invariants_ok(&self) -> bool {
        self.slit1.has_expected_len()
            && self.slit2.has_expected_len()
            && self.total.has_expected_len()
            && self.n_emitted == self.n_blocked + self.n_registered
            && self.n_registered == self.total.total()
            && self.n_displaced <= self.n_registered
            && self.total == Histogram::sum_of(HistogramTag::Total, &self.slit1, &self.slit2)
            && self.final_register.n_orbits() == self.params.n_orbits
    }

    pub fn displaced_fraction(&self) -> f64 {
        if self.n_registered == 0 {
            0.0
        } else {
            self.n_displaced as f64 / self.n_registered as f64
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn alternating_register_starts_with_spin1_innermost() {
        let params = ModelParams::default();
        let reg = OrbitRegister::new(&params);
        let expect = [
            Spin::Spin1,
            Spin::Spin2,
            Spin::Spin1,
            Spin::Spin2,
            Spin::Spin1,
            Spin::Spin2,
            Spin::Spin1,
            Spin::Spin2,
            Spin::Spin1,
            Spin::Spin2,
        ];
        assert_eq!(reg.spins(), &expect);
        assert_eq!(reg.total_flips(), 0);
    }

    #[test]
    fn uniform_register_patterns() {
        let mut params = ModelParams { n_orbits: 1, ..ModelParams::default() };
        params.initial_spin_pattern = SpinPattern::AllSpin2;
        assert_eq!(OrbitRegister::new(&params).spins(), &[Spin::Spin2]);

        let params = ModelParams {
            n_orbits: 3,
            initial_spin_pattern: SpinPattern::AllSpin1,
            ..ModelParams::default()
        };
        let reg = OrbitRegister::new(&params);
        assert_eq!(reg.spins(), &[Spin::Spin1, Spin::Spin1, Spin::Spin1]);
        assert_eq!((1..=3).map(|k| reg.flip_count(k)).collect::<Vec<_>>(), vec![0, 0, 0]);
    }

    #[test]
    fn flip_is_an_involution_and_counts() {
        let params = ModelParams::default();
        let mut reg = OrbitRegister::new(&params);
        let before = reg.spin(3);
        reg.flip(3);
        assert_eq!(reg.spin(3), before.other());
        reg.flip(3);
        assert_eq!(reg.spin(3), before);
        assert_eq!(reg.flip_count(3), 2);
        assert_eq!(reg.flip_count(2), 0);
    }

    #[test]
    fn flip_single_and_pair() {
        let params = ModelParams {
            n_orbits: 1,
            initial_spin_pattern: SpinPattern::AllSpin1,
            ..ModelParams::default()
        };
        let mut reg = OrbitRegister::new(&params);
        reg.flip(1);
        assert_eq!(reg.spins(), &[Spin::Spin2]);

        let params = ModelParams { n_orbits: 2, ..ModelParams::default() };
        let mut reg = OrbitRegister::new(&params);
        reg.flip(2);
        assert_eq!(reg.spins(), &[Spin::Spin1, Spin::Spin1]);
    }

    #[test]
    #[should_panic(expected = "out of range")]
    fn flip_rejects_out_of_range_index() {
        let mut reg = OrbitRegister::new(&ModelParams::default());
        reg.flip(11);
    }

    #[test]
    fn nearest_orbit_examples() {
        let params = ModelParams::default();
        let (k, d) = nearest_orbit(0.27, &params);
        assert_eq!(k, 3);
        assert!((d - 0.03).abs() < 1e-12);

        // exact midpoint ties toward the smaller index
        let (k, d) = nearest_orbit(0.25, &params);
        assert_eq!(k, 2);
        assert!((d - 0.05).abs() < 1e-12);

        // the center is not an orbit
        let (k, d) = nearest_orbit(0.0, &params);
        assert_eq!(k, 1);
        assert!((d - 0.1).abs() < 1e-12);
    }

    #[test]
    fn nearest_orbit_recovers_each_radius_exactly() {
        let params = ModelParams::default();
        for k in 1..=params.n_orbits {
            let (found, d) = nearest_orbit(params.orbit_radius(k), &params);
            assert_eq!(found, k);
            assert_eq!(d, 0.0);
        }
    }

    #[test]
    fn nearest_orbit_beyond_radius_is_outermost() {
        let params = ModelParams::default();
        let (k, d) = nearest_orbit(1.37, &params);
        assert_eq!(k, 10);
        assert!((d - 0.37).abs() < 1e-12);
    }

    #[test]
    fn classify_ordinate_tie_break_and_halves() {
        let params = ModelParams::default();
        assert_eq!(params.classify_ordinate(0.4), Some(SlitTag::Slit1));
        assert_eq!(params.classify_ordinate(-0.4), Some(SlitTag::Slit2));
        assert_eq!(params.classify_ordinate(0.0), Some(SlitTag::Slit1));
        assert_eq!(params.classify_ordinate(1.0), Some(SlitTag::Slit1));
        assert_eq!(params.classify_ordinate(-1.0), Some(SlitTag::Slit2));
        assert_eq!(params.classify_ordinate(1.5), None);
    }

    #[test]
    fn params_validation_rejects_bad_geometry() {
        let base = ModelParams::default;
        let p = ModelParams { atom_radius: 0.0, ..base() };
        assert!(p.validate().is_err());

        let p = ModelParams { n_orbits: 0, ..base() };
        assert!(p.validate().is_err());

        // overlaps slit 2
        let p = ModelParams { slit1_aperture: Aperture { lo: -0.5, hi: 1.0 }, ..base() };
        assert!(p.validate().is_err());

        // outside the segment
        let p = ModelParams { slit2_aperture: Aperture { lo: -2.0, hi: 0.0 }, ..base() };
        assert!(p.validate().is_err());

        assert!(base().validate().is_ok());
    }

    #[test]
    fn histogram_bins_mirror_and_sum() {
        let mut h = Histogram::new(HistogramTag::Slit1);
        h.increment(-90);
        h.increment(10);
        h.increment(10);
        h.increment(89);
        assert_eq!(h.count(-90), 1);
        assert_eq!(h.count(10), 2);
        assert_eq!(h.total(), 4);

        // bin b reflects to -(b+1)
        let m = h.mirrored();
        assert_eq!(m.count(89), 1);
        assert_eq!(m.count(-11), 2);
        assert_eq!(m.count(-90), 1);
        assert_eq!(m.mirrored(), h);

        let mut g = Histogram::new(HistogramTag::Slit2);
        g.increment(10);
        let t = Histogram::sum_of(HistogramTag::Total, &h, &g);
        assert_eq!(t.count(10), 3);
        assert_eq!(t.total(), 5);
    }

    proptest! {
        // Parity: spins equal the initial pattern toggled flip_count times.
        #[test]
        fn register_parity_holds_under_random_flip_sequences(
            flips in proptest::collection::vec(1usize..=10, 0..64)
        ) {
            let params = ModelParams::default();
            let mut reg = OrbitRegister::new(&params);
            for k in flips {
                reg.flip(k);
            }
            for k in 1..=params.n_orbits {
                let mut expect = params.initial_spin_pattern.spin_for(k);
                if reg.flip_count(k) % 2 == 1 {
                    expect = expect.other();
                }
                prop_assert_eq!(reg.spin(k), expect);
            }
        }

        // Distance bounds: within half a spacing once past the first
        // half-gap, within a full spacing everywhere (the axis sits a full
        // spacing from orbit 1).
        #[test]
        fn nearest_orbit_distance_bounds(rho in 0.0f64..1.0) {
            let params = ModelParams::default();
            let spacing = params.orbit_spacing();
            let (k, d) = nearest_orbit(rho, &params);
            prop_assert!((1..=params.n_orbits).contains(&k));
            prop_assert!(d <= spacing + 1e-12);
            if rho >= spacing / 2.0 {
                prop_assert!(d <= spacing / 2.0 + 1e-12);
            }
            // no other orbit is strictly closer
            for j in 1..=params.n_orbits {
                prop_assert!(d <= (rho - params.orbit_radius(j)).abs() + 1e-15);
            }
        }
    }
}
