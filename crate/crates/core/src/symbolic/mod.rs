//! Finite binary words and itineraries.

mod itinerary;
mod word;

pub use itinerary::{itinerary, itinerary_word, ItineraryResult, DEFAULT_EPS_AMB, FLOAT_DEPTH_CAP};
pub use word::{ParseWordError, PrefixOrdering, Word};
pub(crate) use word::lex_compare_digits as lex_cmp;
