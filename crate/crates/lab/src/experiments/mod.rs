pub mod apchar;
pub mod cover;
pub mod domination;
pub mod sharpness;
pub mod weaktype;
