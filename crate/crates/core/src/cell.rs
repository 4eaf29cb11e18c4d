//! Cell geometry, cooling configuration, boundary inputs and heat profiles.
//!
//! Two-dimensional cell models share one layout. The first scaled direction
//! `xi` runs across the cell (radius of a cylinder, width of a pouch) and the
//! second scaled direction `zeta` runs along the height. Both are mapped onto
//! `[-1, 1]`. For a pouch cell the front side plays the role of the cylinder
//! surface (`xi = +1`) and the back side the role of the core (`xi = -1`).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Convection coefficient of an actively cooled side, W m^-2 K^-1.
pub const ACTIVE_H: f64 = 400.0;
/// Convection coefficient of a side exposed to mild air convection, W m^-2 K^-1.
pub const PASSIVE_H: f64 = 30.0;
/// Initial and free-stream temperature used throughout the studies, °C.
pub const AMBIENT_C: f64 = 15.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    Cylindrical,
    Pouch,
}

/// Cross-section of the cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case", deny_unknown_fields)]
pub enum Geometry {
    /// Annular cross-section between `r_in` and `r_out` (m).
    Cylindrical { r_out: f64, r_in: f64 },
    /// Rectangular cross-section of width `width` (m). The model is strictly
    /// two-dimensional and carries a unit depth of 1 m.
    Pouch { width: f64 },
}

/// Geometry and thermo-physical properties of one cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellSpec {
    pub geometry: Geometry,
    /// Cylinder height `L` or pouch height `H`, m.
    pub length: f64,
    /// Density, kg m^-3.
    pub density: f64,
    /// Specific heat capacity, J kg^-1 K^-1.
    pub heat_capacity: f64,
    /// Conductivity across the cell (radial or `k_x`), W m^-1 K^-1.
    pub k_radial: f64,
    /// Conductivity along the height (axial or `k_y`), W m^-1 K^-1.
    pub k_axial: f64,
}

impl CellSpec {
    /// Large-format 45 Ah LFP cylindrical cell.
    pub fn lfp_45ah() -> Self {
        Self {
            geometry: Geometry::Cylindrical {
                r_out: 0.032,
                r_in: 0.004,
            },
            length: 0.198,
            density: 2118.0,
            heat_capacity: 795.0,
            k_radial: 0.67,
            k_axial: 66.6,
        }
    }

    pub fn cylindrical(
        length: f64,
        r_out: f64,
        r_in: f64,
        density: f64,
        heat_capacity: f64,
        k_radial: f64,
        k_axial: f64,
    ) -> Result<Self> {
        let spec = Self {
            geometry: Geometry::Cylindrical { r_out, r_in },
            length,
            density,
            heat_capacity,
            k_radial,
            k_axial,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn pouch(
        height: f64,
        width: f64,
        density: f64,
        heat_capacity: f64,
        k_x: f64,
        k_y: f64,
    ) -> Result<Self> {
        let spec = Self {
            geometry: Geometry::Pouch { width },
            length: height,
            density,
            heat_capacity,
            k_radial: k_x,
            k_axial: k_y,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")))
            }
        };
        positive("length", self.length)?;
        positive("density", self.density)?;
        positive("heat_capacity", self.heat_capacity)?;
        positive("k_radial", self.k_radial)?;
        positive("k_axial", self.k_axial)?;
        match self.geometry {
            Geometry::Cylindrical { r_out, r_in } => {
                positive("r_in", r_in)?;
                positive("r_out", r_out)?;
                if r_out <= r_in {
                    return Err(Error::InvalidArgument(format!(
                        "r_out ({r_out}) must exceed r_in ({r_in})"
                    )));
                }
            }
            Geometry::Pouch { width } => positive("width", width)?,
        }
        Ok(())
    }

    pub fn shape(&self) -> Shape {
        match self.geometry {
            Geometry::Cylindrical { .. } => Shape::Cylindrical,
            Geometry::Pouch { .. } => Shape::Pouch,
        }
    }

    /// Physical extent across the cell: `r_out - r_in` or the pouch width.
    pub fn thickness(&self) -> f64 {
        match self.geometry {
            Geometry::Cylindrical { r_out, r_in } => r_out - r_in,
            Geometry::Pouch { width } => width,
        }
    }

    /// Scale factor `d xi / d r` (alpha for cylinders, lambda for pouches).
    pub fn xi_scale(&self) -> f64 {
        2.0 / self.thickness()
    }

    /// Scale factor `d zeta / d z` (beta for cylinders, zeta for pouches).
    pub fn zeta_scale(&self) -> f64 {
        2.0 / self.length
    }

    /// Physical coordinate across the cell at scaled position `xi`.
    pub fn xi_to_physical(&self, xi: f64) -> f64 {
        match self.geometry {
            Geometry::Cylindrical { r_in, .. } => r_in + (xi + 1.0) / self.xi_scale(),
            Geometry::Pouch { .. } => (xi + 1.0) / self.xi_scale(),
        }
    }

    /// Volume weight of the inner products: the radius `r(xi)` for a cylinder
    /// and 1 for a pouch.
    pub fn volume_weight(&self, xi: f64) -> f64 {
        match self.shape() {
            Shape::Cylindrical => self.xi_to_physical(xi),
            Shape::Pouch => 1.0,
        }
    }

    /// Coefficient `gamma(xi)` of the first-derivative term of the scaled
    /// operator. Zero for pouch cells.
    pub fn gamma(&self, xi: f64) -> f64 {
        match self.geometry {
            Geometry::Cylindrical { r_in, .. } => {
                let alpha = self.xi_scale();
                alpha * alpha * self.k_radial / (1.0 + xi + alpha * r_in)
            }
            Geometry::Pouch { .. } => 0.0,
        }
    }

    pub fn volumetric_heat_capacity(&self) -> f64 {
        self.density * self.heat_capacity
    }

    /// Cell volume in m^3; pouch cells use a unit depth of 1 m.
    pub fn volume(&self) -> f64 {
        match self.geometry {
            Geometry::Cylindrical { r_out, r_in } => {
                std::f64::consts::PI * (r_out * r_out - r_in * r_in) * self.length
            }
            Geometry::Pouch { width } => width * self.length,
        }
    }

    /// Area of one side in m^2 (per metre depth for pouch cells).
    pub fn side_area(&self, side: Side) -> f64 {
        use std::f64::consts::PI;
        match (self.geometry, side) {
            (Geometry::Cylindrical { r_out, .. }, Side::Surface) => 2.0 * PI * r_out * self.length,
            (Geometry::Cylindrical { r_in, .. }, Side::Core) => 2.0 * PI * r_in * self.length,
            (Geometry::Cylindrical { r_out, r_in }, _) => PI * (r_out * r_out - r_in * r_in),
            (Geometry::Pouch { .. }, Side::Surface | Side::Core) => self.length,
            (Geometry::Pouch { width }, _) => width,
        }
    }
}

/// Cell volume in m^3.
pub fn cell_volume(spec: &CellSpec) -> f64 {
    spec.volume()
}

/// Boundary of the two-dimensional domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// `xi = +1`: cylinder outer surface, pouch front side.
    Surface,
    /// `xi = -1`: cylinder core, pouch back side.
    Core,
    /// `zeta = +1`.
    Top,
    /// `zeta = -1`.
    Bottom,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::Surface, Side::Core, Side::Top, Side::Bottom];

    pub fn index(self) -> usize {
        match self {
            Side::Surface => 0,
            Side::Core => 1,
            Side::Top => 2,
            Side::Bottom => 3,
        }
    }

    /// +1 on the sides at the upper end of their coordinate, -1 otherwise.
    /// The boundary input of a side is `sign * h * T_inf`.
    pub fn sign(self) -> f64 {
        match self {
            Side::Surface | Side::Top => 1.0,
            Side::Core | Side::Bottom => -1.0,
        }
    }

    /// Sides whose inputs are states of the model for a given cell shape.
    /// The cylinder core carries no cooling and is dropped.
    pub fn inputs_for(shape: Shape) -> Vec<Side> {
        match shape {
            Shape::Cylindrical => vec![Side::Surface, Side::Top, Side::Bottom],
            Shape::Pouch => vec![Side::Surface, Side::Core, Side::Top, Side::Bottom],
        }
    }

    pub fn label(self, shape: Shape) -> &'static str {
        match (shape, self) {
            (Shape::Cylindrical, Side::Surface) => "s",
            (Shape::Cylindrical, Side::Core) => "c",
            (Shape::Pouch, Side::Surface) => "fs",
            (Shape::Pouch, Side::Core) => "bs",
            (_, Side::Top) => "t",
            (_, Side::Bottom) => "b",
        }
    }
}

/// Convection on one side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SideCooling {
    /// Convection coefficient, W m^-2 K^-1.
    pub h: f64,
    /// Coolant free-stream temperature, °C.
    pub t_inf: f64,
}

/// Per-side convection coefficients and coolant temperatures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoolingConfig {
    pub name: String,
    pub surface: SideCooling,
    pub core: SideCooling,
    pub top: SideCooling,
    pub bottom: SideCooling,
}

impl CoolingConfig {
    /// Same coefficient and temperature on every side (core included).
    pub fn uniform(name: &str, h: f64, t_inf: f64) -> Self {
        let side = SideCooling { h, t_inf };
        Self {
            name: name.to_string(),
            surface: side,
            core: side,
            top: side,
            bottom: side,
        }
    }

    /// All sides adiabatic.
    pub fn insulated() -> Self {
        Self::uniform("insulated", 0.0, AMBIENT_C)
    }

    pub fn side(&self, side: Side) -> SideCooling {
        match side {
            Side::Surface => self.surface,
            Side::Core => self.core,
            Side::Top => self.top,
            Side::Bottom => self.bottom,
        }
    }

    pub fn side_mut(&mut self, side: Side) -> &mut SideCooling {
        match side {
            Side::Surface => &mut self.surface,
            Side::Core => &mut self.core,
            Side::Top => &mut self.top,
            Side::Bottom => &mut self.bottom,
        }
    }

    pub fn h(&self, side: Side) -> f64 {
        self.side(side).h
    }

    pub fn with_side(mut self, side: Side, h: f64, t_inf: f64) -> Self {
        *self.side_mut(side) = SideCooling { h, t_inf };
        self
    }

    pub fn validate_for(&self, shape: Shape) -> Result<()> {
        for side in Side::ALL {
            let c = self.side(side);
            if !(c.h.is_finite() && c.h >= 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "convection coefficient on {side:?} must be finite and non-negative, got {}",
                    c.h
                )));
            }
            if !c.t_inf.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "coolant temperature on {side:?} is not finite"
                )));
            }
        }
        if shape == Shape::Cylindrical && self.core.h != 0.0 {
            return Err(Error::InvalidArgument(
                "the core of a cylindrical cell is not cooled (h_c must be 0)".into(),
            ));
        }
        Ok(())
    }

    /// Boundary inputs `u = sign * h * T_inf` implied by the coolant temperatures.
    pub fn inputs(&self) -> BoundaryInput {
        let mut u = BoundaryInput::zero();
        for side in Side::ALL {
            let c = self.side(side);
            u.set(side, side.sign() * c.h * c.t_inf);
        }
        u
    }
}

/// Cooling power per unit area applied on each side, W m^-2.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BoundaryInput {
    values: [f64; 4],
}

impl BoundaryInput {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new(surface: f64, core: f64, top: f64, bottom: f64) -> Self {
        Self {
            values: [surface, core, top, bottom],
        }
    }

    /// Unit input on one side, zero elsewhere.
    pub fn unit(side: Side) -> Self {
        let mut u = Self::zero();
        u.set(side, 1.0);
        u
    }

    pub fn get(&self, side: Side) -> f64 {
        self.values[side.index()]
    }

    pub fn set(&mut self, side: Side, value: f64) {
        self.values[side.index()] = value;
    }

    /// Input `sign * h * t_inf` for one side given its coolant temperature.
    pub fn set_from_coolant(&mut self, side: Side, h: f64, t_inf: f64) {
        self.set(side, side.sign() * h * t_inf);
    }

    /// Values ordered as `sides`.
    pub fn to_vec(&self, sides: &[Side]) -> Vec<f64> {
        sides.iter().map(|s| self.get(*s)).collect()
    }

    pub fn from_slice(sides: &[Side], values: &[f64]) -> Self {
        let mut u = Self::zero();
        for (s, v) in sides.iter().zip(values) {
            u.set(*s, *v);
        }
        u
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut u = *self;
        for v in &mut u.values {
            *v *= factor;
        }
        u
    }
}

impl std::ops::Add for BoundaryInput {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (a, b) in self.values.iter_mut().zip(rhs.values) {
            *a += b;
        }
        self
    }
}

/// Volumetric heat from current and overpotential, W m^-3:
/// `q = I (V - V_ocv) / V_b`. Negative values (endothermic) pass through.
pub fn bernardi_q(current: f64, voltage: f64, ocv: f64, cell_volume: f64) -> Result<f64> {
    if !(cell_volume.is_finite() && cell_volume > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "cell volume must be positive, got {cell_volume}"
        )));
    }
    Ok(current * (voltage - ocv) / cell_volume)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ProfileKind {
    /// Volumetric heat generation, W m^-3.
    VolumetricQ(Vec<f64>),
    /// Current (A), terminal voltage (V) and open-circuit voltage (V).
    ElectricalIvo {
        current: Vec<f64>,
        voltage: Vec<f64>,
        ocv: Vec<f64>,
    },
}

/// Time-stamped heat input. Samples are held until the next time stamp.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeatProfile {
    times: Vec<f64>,
    kind: ProfileKind,
}

impl HeatProfile {
    pub fn volumetric(times: Vec<f64>, q: Vec<f64>) -> Result<Self> {
        let p = Self {
            times,
            kind: ProfileKind::VolumetricQ(q),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn electrical(times: Vec<f64>, current: Vec<f64>, voltage: Vec<f64>, ocv: Vec<f64>) -> Result<Self> {
        let p = Self {
            times,
            kind: ProfileKind::ElectricalIvo { current, voltage, ocv },
        };
        p.validate()?;
        Ok(p)
    }

    pub fn constant(q: f64) -> Self {
        Self {
            times: vec![0.0],
            kind: ProfileKind::VolumetricQ(vec![q]),
        }
    }

    fn validate(&self) -> Result<()> {
        let n = self.times.len();
        let lengths_match = match &self.kind {
            ProfileKind::VolumetricQ(q) => q.len() == n,
            ProfileKind::ElectricalIvo { current, voltage, ocv } => {
                current.len() == n && voltage.len() == n && ocv.len() == n
            }
        };
        if !lengths_match {
            return Err(Error::InvalidArgument("profile channels differ in length".into()));
        }
        if n == 0 {
            return Err(Error::InvalidArgument("empty heat profile".into()));
        }
        if self.times[0] != 0.0 {
            return Err(Error::InvalidArgument(format!(
                "profile must start at t = 0, starts at {}",
                self.times[0]
            )));
        }
        if let Some(w) = self.times.windows(2).find(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidArgument(format!(
                "profile times must increase strictly ({} then {})",
                w[0], w[1]
            )));
        }
        Ok(())
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn kind(&self) -> &ProfileKind {
        &self.kind
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Converts an electrical profile to volumetric heat through [`bernardi_q`].
    pub fn to_volumetric(&self, cell_volume: f64) -> Result<HeatProfile> {
        match &self.kind {
            ProfileKind::VolumetricQ(_) => Ok(self.clone()),
            ProfileKind::ElectricalIvo { current, voltage, ocv } => {
                let q = current
                    .iter()
                    .zip(voltage)
                    .zip(ocv)
                    .map(|((i, v), o)| bernardi_q(*i, *v, *o, cell_volume))
                    .collect::<Result<Vec<_>>>()?;
                HeatProfile::volumetric(self.times.clone(), q)
            }
        }
    }

    pub fn q_values(&self) -> Option<&[f64]> {
        match &self.kind {
            ProfileKind::VolumetricQ(q) => Some(q),
            ProfileKind::ElectricalIvo { .. } => None,
        }
    }

    /// Multiplies the volumetric heat by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<HeatProfile> {
        let q = self.q_values().ok_or_else(|| {
            Error::InvalidArgument("scale an electrical profile after converting it".into())
        })?;
        HeatProfile::volumetric(self.times.clone(), q.iter().map(|v| v * factor).collect())
    }
}

/// Number of uniform steps of size `dt` that fit in `horizon`.
pub fn step_count(dt: f64, horizon: f64) -> usize {
    (horizon / dt + 1e-9).floor() as usize
}

/// Zero-order-hold resampling of a volumetric profile onto `t_k = k dt`,
/// `k = 0..=horizon/dt`. Values past the last sample hold the last value.
pub fn resample_profile(profile: &HeatProfile, dt: f64, horizon: f64) -> Result<Vec<f64>> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
    }
    if !(horizon.is_finite() && horizon >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "horizon must be non-negative, got {horizon}"
        )));
    }
    if profile.is_empty() {
        return Err(Error::InvalidArgument("empty heat profile".into()));
    }
    let q = profile.q_values().ok_or_else(|| {
        Error::InvalidArgument("resample requires a volumetric profile".into())
    })?;
    let times = profile.times();
    let n = step_count(dt, horizon);
    let mut out = Vec::with_capacity(n + 1);
    let mut j = 0;
    for k in 0..=n {
        let t = k as f64 * dt;
        while j + 1 < times.len() && times[j + 1] <= t + 1e-9 * dt {
            j += 1;
        }
        out.push(q[j]);
    }
    Ok(out)
}

/// The five cooling scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scenario {
    /// Surface cooling.
    #[serde(rename = "SC")]
    Sc,
    /// Bottom tab cooling.
    #[serde(rename = "bTC")]
    BTc,
    /// Bottom tab and surface cooling.
    #[serde(rename = "bTSC")]
    BTsc,
    /// Bottom and top tab cooling.
    #[serde(rename = "btTC")]
    BtTc,
    /// All tabs and surface cooling.
    #[serde(rename = "aTSC")]
    ATsc,
}

impl Scenario {
    pub const ALL: [Scenario; 5] = [
        Scenario::Sc,
        Scenario::BTc,
        Scenario::BTsc,
        Scenario::BtTc,
        Scenario::ATsc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Sc => "SC",
            Scenario::BTc => "bTC",
            Scenario::BTsc => "bTSC",
            Scenario::BtTc => "btTC",
            Scenario::ATsc => "aTSC",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.name() == name)
    }

    /// Sides under active cooling. For pouch cells, aTSC also cools the back side.
    pub fn active_sides(self, shape: Shape) -> Vec<Side> {
        match self {
            Scenario::Sc => vec![Side::Surface],
            Scenario::BTc => vec![Side::Bottom],
            Scenario::BTsc => vec![Side::Surface, Side::Bottom],
            Scenario::BtTc => vec![Side::Top, Side::Bottom],
            Scenario::ATsc => match shape {
                Shape::Cylindrical => vec![Side::Surface, Side::Top, Side::Bottom],
                Shape::Pouch => vec![Side::Surface, Side::Core, Side::Top, Side::Bottom],
            },
        }
    }

    /// Cooling configuration with every free-stream temperature at `t_inf`.
    pub fn cooling(self, shape: Shape, t_inf: f64) -> CoolingConfig {
        let active = self.active_sides(shape);
        let mut c = CoolingConfig::uniform(self.name(), PASSIVE_H, t_inf);
        for side in Side::ALL {
            let h = if shape == Shape::Cylindrical && side == Side::Core {
                0.0
            } else if active.contains(&side) {
                ACTIVE_H
            } else {
                PASSIVE_H
            };
            c.side_mut(side).h = h;
        }
        c
    }
}
