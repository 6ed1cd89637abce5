//! HTTP moderation service over event-sourced sessions.

mod api;
mod error;
pub mod log;
mod store;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use dynrank_core::RuleId;

pub use api::{router, CreateSession, Joined, Preview};
pub use error::ServiceError;
pub use store::{token_digest, Entry, History, RecordedStep, SessionHandle, Store, View};

#[derive(Clone, Debug)]
pub struct ServeConfig {
    pub bind: SocketAddr,
    pub data_dir: PathBuf,
    pub default_rule: RuleId,
}

/// Replays the data directory and serves until interrupted.
pub async fn serve(config: ServeConfig) -> anyhow::Result<()> {
    let store = Arc::new(Store::open(&config.data_dir, config.default_rule)?);
    tracing::info!(sessions = store.ids().len(), dir = %config.data_dir.display(), "replayed event logs");
    let listener = tokio::net::TcpListener::bind(config.bind).await?;
    tracing::info!(addr = %listener.local_addr()?, "listening");
    axum::serve(listener, router(store))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
