//! Open book monodromies on compact surfaces: twist words, cyclic branched
//! covers, characteristic foliation movies and a certificate engine that
//! combines them into tightness verdicts.

pub mod certify;
pub mod covers;
pub mod error;
pub mod foliation;
pub mod formats;
pub mod linalg;
pub mod mcg;
pub mod presets;
pub mod ribbon;
pub mod scenario;
pub mod surface;
pub mod words;
