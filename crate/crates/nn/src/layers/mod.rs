pub mod activation;
pub mod batchnorm;
pub mod conv;
pub mod linear;
pub mod pool;

pub use activation::{sigmoid, Act, Activation, ActivationRegistry, Relu, Sigmoid, Swish};
pub use batchnorm::{BatchNorm2d, BN_EPS, BN_MOMENTUM};
pub use conv::{Conv2d, Conv2dSpec};
pub use linear::{Dropout, Linear};
