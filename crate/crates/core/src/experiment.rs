//! Seeded emission, per-context slit gating, and full runs feeding the
//! dynamics pipeline in strict emission order.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dynamics::{apply_interference, register_on_screen, scatter};
use crate::error::{Error, Result};
use crate::model::{
    ExperimentContext, Flight, Histogram, HistogramTag, ModelParams, OrbitRegister, ParticleFate,
    ParticleRecord, RunRecord, Sign, SlitTag,
};
use crate::numerics::SolverSettings;

/// Generator identity recorded in every RunRecord. Position ordinates take
/// the top 53 bits of each ChaCha8 output; signs take bit 0 of a second,
/// independently sub-seeded ChaCha8 stream.
pub const RNG_ALGORITHM: &str = "chacha8; splitmix64 sub-seeds (position, sign); u53 ordinates";

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The two independent deterministic streams a run consumes.
///
/// Both are derived from the run seed by successive splitmix64 outputs, so
/// identical seeds reproduce identical byte streams on every platform.
pub struct RngStreams {
    position: ChaCha8Rng,
    sign: ChaCha8Rng,
}

impl RngStreams {
    pub fn new(seed: u64) -> RngStreams {
        let mut state = seed;
        let position = ChaCha8Rng::seed_from_u64(splitmix64(&mut state));
        let sign = ChaCha8Rng::seed_from_u64(splitmix64(&mut state));
        RngStreams { position, sign }
    }

    /// Uniform draw on [lo, hi) with 53-bit resolution.
    pub fn next_ordinate(&mut self, lo: f64, hi: f64) -> f64 {
        const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
        let unit = (self.position.next_u64() >> 11) as f64 * SCALE;
        lo + (hi - lo) * unit
    }

    /// Fair scattering-side draw.
    pub fn next_sign(&mut self) -> Sign {
        if self.sign.next_u64() & 1 == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// Emission-budget half for SequentialHalves; other contexts stay in `First`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    First,
    Second,
}

/// One emission before any dynamics: where it started and which slit, if
/// any, let it through. `None` means absorbed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Emission {
    pub ordinate: f64,
    pub tag: Option<SlitTag>,
}

/// Aperture membership plus context gating; `None` is a wall or closed slit.
fn gate(params: &ModelParams, context: ExperimentContext, y: f64) -> Option<SlitTag> {
    params.classify_ordinate(y).filter(|&slit| context.slit_open(slit))
}

/// Draws one emission ordinate and resolves its slit under the context.
///
/// The free contexts draw on the full segment [-R, R); SequentialHalves
/// draws directly on the open aperture for its phase, so nothing is blocked.
pub fn emit(
    streams: &mut RngStreams,
    context: ExperimentContext,
    phase: Phase,
    params: &ModelParams,
) -> Emission {
    if context == ExperimentContext::SequentialHalves {
        let (aperture, slit) = match phase {
            Phase::First => (params.slit1_aperture, SlitTag::Slit1),
            Phase::Second => (params.slit2_aperture, SlitTag::Slit2),
        };
        let ordinate = streams.next_ordinate(aperture.lo, aperture.hi);
        return Emission { ordinate, tag: Some(slit) };
    }
    let r = params.atom_radius;
    let ordinate = streams.next_ordinate(-r, r);
    Emission { ordinate, tag: gate(params, context, ordinate) }
}

/// Runs `n_particles` emissions through the full pipeline.
pub fn run(
    params: &ModelParams,
    context: ExperimentContext,
    n_particles: u64,
    seed: u64,
) -> Result<RunRecord> {
    run_observed(params, context, n_particles, seed, |_| {})
}

/// Like [`run`], handing every per-particle record to `observer` in emission
/// order. The register is shared across the whole run, so particle order is
/// semantically significant and the loop is strictly sequential.
pub fn run_observed(
    params: &ModelParams,
    context: ExperimentContext,
    n_particles: u64,
    seed: u64,
    mut observer: impl FnMut(&ParticleRecord),
) -> Result<RunRecord> {
    params.validate()?;
    if n_particles == 0 {
        return Err(Error::Domain("a run needs at least one particle".into()));
    }

    let solver = SolverSettings::default();
    let mut streams = RngStreams::new(seed);
    let mut register = OrbitRegister::new(params);
    let mut slit1 = Histogram::new(HistogramTag::Slit1);
    let mut slit2 = Histogram::new(HistogramTag::Slit2);
    let (mut n_blocked, mut n_registered, mut n_displaced) = (0u64, 0u64, 0u64);

    let first_half = n_particles.div_ceil(2);
    for i in 0..n_particles {
        let phase = if i < first_half { Phase::First } else { Phase::Second };
        let emission = emit(&mut streams, context, phase, params);
        // consumed for every emission, blocked or not, so opening a slit
        // never shifts the sign sequence seen through the other one
        let sign = streams.next_sign();

        let Some(slit) = emission.tag else {
            n_blocked += 1;
            observer(&ParticleRecord {
                emission_ordinate: emission.ordinate,
                fate: ParticleFate::Blocked,
            });
            continue;
        };

        let fx = apply_interference(emission.ordinate, slit, &mut register, params, &solver)?;
        if fx.displaced {
            n_displaced += 1;
        }
        let angle = scatter(fx.ordinate, sign, params);
        let bin = register_on_screen(angle)?;
        match slit {
            SlitTag::Slit1 => slit1.increment(bin),
            SlitTag::Slit2 => slit2.increment(bin),
        }
        n_registered += 1;
        observer(&ParticleRecord {
            emission_ordinate: emission.ordinate,
            fate: ParticleFate::Registered(Flight {
                slit,
                nearest_orbit: fx.orbit,
                displaced: fx.displaced,
                displacement_before: fx.dist_before,
                displacement_after: fx.dist_after,
                scatter_sign: sign,
                angle,
                screen_bin: bin,
            }),
        });
    }

    let total = Histogram::sum_of(HistogramTag::Total, &slit1, &slit2);
    let record = RunRecord {
        params: params.clone(),
        context,
        seed,
        rng_algorithm: RNG_ALGORITHM.to_string(),
        n_emitted: n_particles,
        n_blocked,
        n_registered,
        n_displaced,
        slit1,
        slit2,
        total,
        final_register: register,
    };
    debug_assert!(record.invariants_ok());
    Ok(record)
}

/// Re-executes a record's run and compares bit-exactly.
pub fn replay_check(record: &RunRecord) -> bool {
    match run(&record.params, record.context, record.n_emitted, record.seed) {
        Ok(replay) => replay == *record,
        Err(_) => false,
    }
}
