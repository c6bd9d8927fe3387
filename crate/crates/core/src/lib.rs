pub mod baker;
pub mod constants;
pub mod numeric;
pub mod par;
pub mod pipeline;
pub mod reduction;
pub mod repdigit;
pub mod sequence;
