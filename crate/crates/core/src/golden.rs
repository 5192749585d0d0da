//! Published growth values and closed forms used as references.

use crate::series::RationalFn;
use crate::words::{Alphabet, Kind};

/// B3, dual generators, lengths 0..=21.
pub const B3_DUAL_S: [u64; 22] = [
    1, 6, 20, 54, 134, 318, 734, 1662, 3710, 8190, 17918, 38910, 83966, 180222, 385022, 819198,
    1736702, 3670014, 7733246, 16252926, 34078718, 71303166,
];
pub const B3_DUAL_G: [u64; 22] = [
    1, 6, 30, 126, 498, 1926, 7410, 28566, 110658, 431046, 1687890, 6639606, 26216418, 103827366,
    412169970, 1639212246, 6528347778, 26027690886, 103853269650, 414639810486, 1656237864738,
    6617984181606,
];

/// B4, Artin generators, lengths 0..=25.
pub const B4_ARTIN_S: [u64; 26] = [
    1, 6, 26, 98, 338, 1110, 3542, 11098, 34362, 105546, 322400, 980904, 2975728, 9007466,
    27218486, 82133734, 247557852, 745421660, 2242595598, 6741618346, 20252254058, 60800088680,
    182422321452, 547032036564, 1639548505920, 4911638066620,
];
pub const B4_ARTIN_G: [u64; 26] = [
    1, 6, 30, 142, 646, 2870, 12558, 54026, 229338, 963570, 4016674, 16641454, 68614150,
    281799158, 1153638466, 4710108514, 19186676438, 78004083510, 316591341866, 1283041428650,
    5193053664554, 20994893965398, 84795261908498, 342173680884002, 1379691672165334,
    5559241797216166,
];

/// B4, dual generators, lengths 0..=17.
pub const B4_DUAL_S: [u64; 18] = [
    1, 12, 84, 478, 2500, 12612, 62570, 303356, 1506212, 7348366, 35773324, 173885572, 844277874,
    4095929948, 19858981932, 96242356958, 466262144180, 2258320991652,
];
pub const B4_DUAL_G: [u64; 18] = [
    1, 12, 132, 1340, 12788, 117452, 1053604, 9311420, 81488628, 708368540, 6128211364,
    52826999612, 454136092148, 3895624824092, 33359143410468, 285259736104444,
    2436488694821748, 20790986096580060,
];

/// Spherical growth of B3 with Artin generators (proved).
pub const B3_ARTIN_SPHERICAL: &str = "(t+1)(2t^3-t^2+t-1)/((t-1)(2t-1)(t^2+t-1))";
/// Geodesic growth of B3 with Artin generators (proved).
pub const B3_ARTIN_GEODESIC: &str = "(t^4+3t^3+t+1)/((t^2+2t-1)(t^2+t-1))";
/// Spherical growth of B3 with dual generators (conjectured).
pub const B3_DUAL_SPHERICAL: &str = "(t+1)(2t^2-1)/((t-1)(2t-1)^2)";
/// Geodesic growth of B3 with dual generators (conjectured).
pub const B3_DUAL_GEODESIC: &str = "(12t^3-2t^2+3t-1)/((2t-1)(3t-1)(4t-1))";
/// Spherical growth of B4 with dual generators (conjectured).
pub const B4_DUAL_SPHERICAL: &str =
    "-(t+1)(10t^6-10t^5-3t^4+11t^3-4t^2-3t+1)/((t-1)(5t^2-5t+1)(10t^4-20t^3+19t^2-8t+1))";

pub fn rational(expr: &str) -> RationalFn {
    RationalFn::parse(expr).expect("reference expression parses")
}

/// Tabulated (s, g) for an alphabet, if any.
pub fn table(alphabet: Alphabet) -> Option<(&'static [u64], &'static [u64])> {
    match (alphabet.strands(), alphabet.kind()) {
        (3, Kind::Dual) => Some((&B3_DUAL_S, &B3_DUAL_G)),
        (4, Kind::Artin) => Some((&B4_ARTIN_S, &B4_ARTIN_G)),
        (4, Kind::Dual) => Some((&B4_DUAL_S, &B4_DUAL_G)),
        _ => None,
    }
}

/// Closed forms (s, g) for an alphabet; either may be unknown.
pub fn closed_forms(alphabet: Alphabet) -> (Option<RationalFn>, Option<RationalFn>) {
    match (alphabet.strands(), alphabet.kind()) {
        (3, Kind::Artin) => (Some(rational(B3_ARTIN_SPHERICAL)), Some(rational(B3_ARTIN_GEODESIC))),
        (3, Kind::Dual) => (Some(rational(B3_DUAL_SPHERICAL)), Some(rational(B3_DUAL_GEODESIC))),
        (4, Kind::Dual) => (Some(rational(B4_DUAL_SPHERICAL)), None),
        _ => (None, None),
    }
}

/// Reference (s, g) of length `len` when obtainable, from a table or a closed form.
pub fn reference(alphabet: Alphabet, len: usize) -> (Option<Vec<u64>>, Option<Vec<u64>>) {
    let from_table = table(alphabet);
    let (fs, fg) = closed_forms(alphabet);
    let pick = |tab: Option<&'static [u64]>, form: Option<RationalFn>| -> Option<Vec<u64>> {
        if let Some(t) = tab.filter(|t| t.len() >= len) {
            return Some(t[..len].to_vec());
        }
        let e = form?.expand(len).ok()?;
        e.coeffs.iter().map(|c| u64::try_from(c).ok()).collect()
    };
    (pick(from_table.map(|t| t.0), fs), pick(from_table.map(|t| t.1), fg))
}
