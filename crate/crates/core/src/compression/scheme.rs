use crate::error::{Error, Result};
use crate::opt::{compose_par, compose_seq, ChannelMat};
use crate::system::SystemLabel;

/// Encoder `A^⊗N → B^⊗M` and decoder back, with `B` the obit.
#[derive(Debug, Clone)]
pub struct CompressionScheme {
    encoder: ChannelMat,
    decoder: ChannelMat,
    round_trip: ChannelMat,
    n: usize,
    m: usize,
    obit: SystemLabel,
    family: String,
}

impl CompressionScheme {
    pub fn new(
        encoder: ChannelMat,
        decoder: ChannelMat,
        n: usize,
        m: usize,
        obit: SystemLabel,
        family: impl Into<String>,
    ) -> Result<Self> {
        if !encoder.is_deterministic() || !decoder.is_deterministic() {
            return Err(Error::InvalidChannel(
                "encoder and decoder must be deterministic".into(),
            ));
        }
        let code = obit.power(m)?;
        if encoder.output() != &code && !(m == 0 && encoder.output().is_trivial()) {
            return Err(Error::SystemMismatch(format!(
                "encoder outputs {} but the code is {code}",
                encoder.output()
            )));
        }
        if decoder.input() != encoder.output() || decoder.output() != encoder.input() {
            return Err(Error::SystemMismatch(format!(
                "decoder {} → {} does not invert encoder {} → {}",
                decoder.input(),
                decoder.output(),
                encoder.input(),
                encoder.output()
            )));
        }
        let round_trip = compose_seq(&encoder, &decoder)?;
        Ok(Self {
            encoder,
            decoder,
            round_trip,
            n,
            m,
            obit,
            family: family.into(),
        })
    }

    pub fn encoder(&self) -> &ChannelMat {
        &self.encoder
    }

    pub fn decoder(&self) -> &ChannelMat {
        &self.decoder
    }

    /// `D ∘ E` on `A^⊗N`.
    pub fn channel(&self) -> &ChannelMat {
        &self.round_trip
    }

    pub fn input(&self) -> &SystemLabel {
        self.encoder.input()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn rate(&self) -> f64 {
        self.m as f64 / self.n as f64
    }

    pub fn obit(&self) -> &SystemLabel {
        &self.obit
    }

    pub fn family(&self) -> &str {
        &self.family
    }

    /// The identity scheme on `A^⊗N` when `A` is itself an obit power.
    pub fn identity(sys: &SystemLabel, n: usize, obit: &SystemLabel, m: usize) -> Result<Self> {
        let id = ChannelMat::identity(sys);
        Self::new(id.clone(), id, n, m, obit.clone(), "identity")
    }
}

/// Run two schemes side by side on `A^⊗N ⊗ A'^⊗N`.
pub fn product_scheme(s1: &CompressionScheme, s2: &CompressionScheme) -> Result<CompressionScheme> {
    if s1.obit != s2.obit || s1.n != s2.n {
        return Err(Error::SystemMismatch(
            "product schemes need the same obit and block length".into(),
        ));
    }
    CompressionScheme::new(
        compose_par(&s1.encoder, &s2.encoder)?,
        compose_par(&s1.decoder, &s2.decoder)?,
        s1.n,
        s1.m + s2.m,
        s1.obit.clone(),
        format!("{}×{}", s1.family, s2.family),
    )
}

/// `Ẽ = E ∘ U^⊗N`, `D̃ = (U⁻¹)^⊗N ∘ D`: the scheme for `U⁻¹ρ` built from one
/// for `ρ`.
pub fn conjugate_scheme(s: &CompressionScheme, u: &ChannelMat, u_inv: &ChannelMat) -> Result<CompressionScheme> {
    let round = compose_seq(u, u_inv)?;
    let id = ChannelMat::identity(u.input());
    let err = (round.matrix() - id.matrix()).amax();
    if u.input() != u.output() || err > 1e-9 || !u.is_deterministic() {
        return Err(Error::InvalidChannel(format!(
            "channel is not reversible with the supplied inverse (residual {err:.3e})"
        )));
    }
    let mut un = u.clone();
    let mut un_inv = u_inv.clone();
    for _ in 1..s.n {
        un = compose_par(&un, u)?;
        un_inv = compose_par(&un_inv, u_inv)?;
    }
    if un.input() != s.input() {
        return Err(Error::SystemMismatch(format!(
            "reversible channel on {} does not match scheme input {}",
            un.input(),
            s.input()
        )));
    }
    CompressionScheme::new(
        compose_seq(&un, &s.encoder)?,
        compose_seq(&s.decoder, &un_inv)?,
        s.n,
        s.m,
        s.obit.clone(),
        format!("{}∘U", s.family),
    )
}
