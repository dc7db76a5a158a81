//! Analytic gas model and fiat conversion.

use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::L1Error;

/// Gas prices per operation. Defaults follow public Ethereum precompile and
/// calldata pricing; override them with a TOML file of `key = value` lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GasSchedule {
    pub tx_base: u64,
    pub pairing_base: u64,
    pub pairing_per_pair: u64,
    pub ecmul_per_input: u64,
    pub ecadd_per_input: u64,
    pub calldata_nonzero_byte: u64,
    pub calldata_zero_byte: u64,
    pub storage_update: u64,
    /// Post each transfer's data alongside the proof. Off by default: the
    /// validity proof and the two roots are the only calldata.
    pub post_tx_data: bool,
}

impl Default for GasSchedule {
    fn default() -> Self {
        Self {
            tx_base: 21_000,
            pairing_base: 45_000,
            pairing_per_pair: 34_000,
            ecmul_per_input: 6_000,
            ecadd_per_input: 150,
            calldata_nonzero_byte: 16,
            calldata_zero_byte: 4,
            storage_update: 5_000,
            post_tx_data: false,
        }
    }
}

impl GasSchedule {
    pub fn from_toml(s: &str) -> Result<Self, L1Error> {
        toml::from_str(s).map_err(|e| L1Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, L1Error> {
        let s = std::fs::read_to_string(path).map_err(|e| L1Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml(&s)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("flat struct serializes")
    }
}

/// `tx_base + pairing_base + 4 pairing_per_pair + k (ecmul + ecadd) + calldata + storage_update`
pub fn gas_for_submission(publics_count: usize, calldata: &[u8], schedule: &GasSchedule) -> u64 {
    let calldata_gas: u64 = calldata
        .iter()
        .map(|b| if *b == 0 { schedule.calldata_zero_byte } else { schedule.calldata_nonzero_byte })
        .sum();
    schedule.tx_base
        + schedule.pairing_base
        + 4 * schedule.pairing_per_pair
        + publics_count as u64 * (schedule.ecmul_per_input + schedule.ecadd_per_input)
        + calldata_gas
        + schedule.storage_update
}

/// Gas price and ETH/USD rate, kept as exact decimals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PriceConfig {
    #[serde(with = "decimal")]
    pub gas_price_gwei: BigRational,
    #[serde(with = "decimal")]
    pub eth_usd: BigRational,
}

impl Default for PriceConfig {
    fn default() -> Self {
        Self { gas_price_gwei: BigRational::from_integer(20.into()), eth_usd: BigRational::from_integer(3000.into()) }
    }
}

impl PriceConfig {
    pub fn new(gas_price_gwei: &str, eth_usd: &str) -> Result<Self, L1Error> {
        Ok(Self { gas_price_gwei: parse_decimal(gas_price_gwei)?, eth_usd: parse_decimal(eth_usd)? })
    }

    pub fn from_toml(s: &str) -> Result<Self, L1Error> {
        toml::from_str(s).map_err(|e| L1Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, L1Error> {
        let s = std::fs::read_to_string(path).map_err(|e| L1Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml(&s)
    }
}

/// Both schedule and prices in one file: `[gas]` and `[price]` tables.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CostConfig {
    pub gas: GasSchedule,
    pub price: PriceConfig,
}

impl CostConfig {
    pub fn from_toml(s: &str) -> Result<Self, L1Error> {
        toml::from_str(s).map_err(|e| L1Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, L1Error> {
        let s = std::fs::read_to_string(path).map_err(|e| L1Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml(&s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TxCost {
    pub gas_per_tx: BigRational,
    /// Rounded half-to-even to [`USD_PLACES`] decimal places.
    pub usd_per_tx: BigRational,
}

pub const USD_PLACES: u32 = 6;

impl TxCost {
    pub fn gas_per_tx_string(&self) -> String {
        format_decimal(&self.gas_per_tx, None)
    }

    pub fn usd_per_tx_string(&self) -> String {
        format_decimal(&self.usd_per_tx, Some(USD_PLACES))
    }
}

/// `gas_used / m` and its USD value at `price`.
pub fn per_tx_cost(gas_used: u64, m: usize, price: &PriceConfig) -> Result<TxCost, L1Error> {
    if m == 0 {
        return Err(L1Error::Usage("batch size must be at least 1".into()));
    }
    let gas_per_tx = BigRational::new(gas_used.into(), m.into());
    let wei_per_gwei = BigRational::new(1.into(), 1_000_000_000.into());
    let usd = &gas_per_tx * &price.gas_price_gwei * wei_per_gwei * &price.eth_usd;
    Ok(TxCost { gas_per_tx, usd_per_tx: round_half_even(&usd, USD_PLACES) })
}

pub fn round_half_even(x: &BigRational, places: u32) -> BigRational {
    let scale = BigInt::from(10).pow(places);
    let scaled = x * BigRational::from_integer(scale.clone());
    let (q, r) = scaled.numer().div_mod_floor(scaled.denom());
    let twice = BigInt::from(2) * r;
    let rounded = match twice.cmp(scaled.denom()) {
        std::cmp::Ordering::Less => q,
        std::cmp::Ordering::Greater => q + 1,
        std::cmp::Ordering::Equal => {
            if q.is_even() {
                q
            } else {
                q + 1
            }
        }
    };
    BigRational::new(rounded, scale)
}

/// Exact decimal rendering. With `places`, pads to that many digits (value assumed
/// already rounded); without, prints the shortest exact form and falls back to
/// 12 rounded digits for non-terminating values.
pub fn format_decimal(x: &BigRational, places: Option<u32>) -> String {
    let places = places.unwrap_or_else(|| terminating_places(x).unwrap_or(12));
    let r = round_half_even(x, places);
    let scale = BigInt::from(10).pow(places);
    let scaled = (r * BigRational::from_integer(scale.clone())).to_integer();
    let sign = if scaled.is_negative() { "-" } else { "" };
    let abs = scaled.abs();
    let (int, frac) = abs.div_mod_floor(&scale);
    if places == 0 {
        return format!("{sign}{int}");
    }
    format!("{sign}{int}.{:0>width$}", frac.to_string(), width = places as usize)
}

fn terminating_places(x: &BigRational) -> Option<u32> {
    let mut d = x.denom().clone();
    let mut twos = 0u32;
    let mut fives = 0u32;
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    while (&d % &two).is_zero() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    (d == BigInt::from(1)).then_some(twos.max(fives))
}

pub fn parse_decimal(s: &str) -> Result<BigRational, L1Error> {
    let bad = || L1Error::Config(format!("{s:?} is not a decimal number"));
    let s = s.trim();
    let (neg, body) = s.strip_prefix('-').map_or((false, s), |b| (true, b));
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let value = BigRational::new(digits, BigInt::from(10).pow(frac.len() as u32));
    Ok(if neg { -value } else { value })
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
}

mod decimal {
    use super::*;
    use serde::{de::Error, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigRational, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&format_decimal(x, None))
    }

    /// Accepts integers, floats (by their shortest decimal form) or decimal strings.
    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<BigRational, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Num {
            Int(i64),
            Float(f64),
            Text(String),
        }
        let text = match Num::deserialize(de)? {
            Num::Int(i) => i.to_string(),
            Num::Float(f) => format!("{f}"),
            Num::Text(s) => s,
        };
        parse_decimal(&text).map_err(D::Error::custom)
    }
}
