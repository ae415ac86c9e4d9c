//! Session service for playing against the engine over HTTP.
//!
//! Each session holds one game between a human and the hybrid engine at a
//! chosen difficulty. The engine's reply is computed on a blocking worker,
//! never on the request path; clients poll the session or subscribe to its
//! event stream.

pub mod error;
pub mod http;
pub mod session;
pub mod store;

pub use error::ServiceError;
pub use http::{router, serve};
pub use session::{Session, SessionStatus, SessionView};
pub use store::{ServiceConfig, SessionStore};
