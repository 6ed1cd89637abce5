//! Sessions as event-sourced state: the log is the source of truth and the
//! in-memory state is a fold over it.

use std::collections::{BTreeSet, HashMap};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};

use dynrank_core::session::HistoryEntry;
use dynrank_core::{ApprovalProfile, CandidateId, RuleId, SessionState};
use serde::Serialize;
use sha2::{Digest, Sha256};
use tokio::sync::broadcast;

use super::error::ServiceError;
use super::log::{Event, EventLog, Record};
use crate::format::TrajectoryDoc;

type Result<T, E = ServiceError> = std::result::Result<T, E>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Entry {
    pub position: usize,
    pub name: String,
    pub approvals: usize,
}

/// What readers see: the cached ranking after the latest event.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct View {
    pub session: String,
    pub seq: u64,
    pub rule: String,
    pub h: Option<usize>,
    pub iteration: usize,
    pub voters: usize,
    pub implemented: Vec<String>,
    pub ranking: Vec<Entry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct History {
    pub trajectory: TrajectoryDoc,
    /// Rankings as they were shown when each candidate was implemented.
    pub recorded: Vec<RecordedStep>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RecordedStep {
    pub ranking: Vec<String>,
    pub implemented: String,
}

fn entries(profile: &ApprovalProfile, ranking: &[CandidateId]) -> Vec<Entry> {
    ranking
        .iter()
        .enumerate()
        .map(|(i, &c)| Entry {
            position: i + 1,
            name: profile.name(c).to_string(),
            approvals: profile.approval_score(c),
        })
        .collect()
}

pub fn token_digest(token: &str) -> String {
    hex::encode(Sha256::digest(token.as_bytes()))
}

/// The state folded from a session's events.
#[derive(Clone, Debug)]
struct Live {
    candidates: Vec<String>,
    ballots: Vec<BTreeSet<usize>>,
    tokens: HashMap<String, usize>,
    state: SessionState,
}

impl Live {
    fn created(rule: &str, h: Option<usize>, candidates: &[String]) -> Result<Self> {
        let rule: RuleId = rule.parse()?;
        let profile = ApprovalProfile::from_names::<_, Vec<String>>(candidates, &[])?;
        let state = SessionState::new(profile, rule, h)?;
        Ok(Live { candidates: candidates.to_vec(), ballots: Vec::new(), tokens: HashMap::new(), state })
    }

    fn profile(&self) -> Result<ApprovalProfile> {
        let ballots = self.ballots.iter().map(|b| b.iter().map(|&c| CandidateId::new(c)).collect()).collect();
        Ok(ApprovalProfile::new(self.candidates.clone(), ballots)?)
    }

    fn candidate_index(&self, name: &str) -> Result<usize> {
        self.candidates
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| ServiceError::NotFound(format!("unknown candidate `{name}`")))
    }

    /// The state after `event`, or the reason it is rejected.
    fn apply(&self, event: &Event) -> Result<Live> {
        let mut next = self.clone();
        match event {
            Event::Created { .. } => return Err(ServiceError::BadRequest("session already created".into())),
            Event::CandidateSubmitted { name } => {
                if name.trim().is_empty() {
                    return Err(ServiceError::BadRequest("candidate name is empty".into()));
                }
                if self.candidates.contains(name) {
                    return Err(ServiceError::Conflict(format!("candidate `{name}` already submitted")));
                }
                next.candidates.push(name.clone());
                next.state = self.state.update_profile(next.profile()?)?;
            }
            Event::VoterJoined { voter, token_sha256 } => {
                if *voter != self.ballots.len() {
                    return Err(ServiceError::BadRequest("voter ids are assigned in order".into()));
                }
                next.ballots.push(BTreeSet::new());
                next.tokens.insert(token_sha256.clone(), *voter);
                next.state = self.state.update_profile(next.profile()?)?;
            }
            Event::Vote { voter, candidate, approve } => {
                let c = self.candidate_index(candidate)?;
                let ballot =
                    next.ballots.get_mut(*voter).ok_or_else(|| ServiceError::NotFound("unknown voter".into()))?;
                let changed = if *approve { ballot.insert(c) } else { ballot.remove(&c) };
                if changed {
                    next.state = self.state.update_profile(next.profile()?)?;
                }
            }
            Event::Implemented { candidate } => {
                let c = self.state.profile().id(candidate)?;
                next.state = self.state.implement(c)?;
            }
        }
        Ok(next)
    }

    fn view(&self, session: &str, seq: u64) -> View {
        let s = &self.state;
        View {
            session: session.to_string(),
            seq,
            rule: s.rule().to_string(),
            h: s.depth(),
            iteration: s.iteration(),
            voters: s.profile().num_voters(),
            implemented: s.implemented_names().into_iter().map(String::from).collect(),
            ranking: entries(s.profile(), s.ranking().as_slice()),
        }
    }
}

struct Snapshot {
    view: Arc<View>,
    state: SessionState,
}

struct Writer {
    live: Live,
    log: EventLog,
}

/// One session: a single writer appending to the log, and an immutable
/// snapshot for readers.
pub struct SessionHandle {
    id: String,
    writer: Mutex<Writer>,
    snapshot: RwLock<Arc<Snapshot>>,
    updates: broadcast::Sender<Arc<View>>,
}

impl SessionHandle {
    fn new(id: String, live: Live, log: EventLog) -> Self {
        let snapshot = Arc::new(Snapshot { view: Arc::new(live.view(&id, log.seq())), state: live.state.clone() });
        let (updates, _) = broadcast::channel(64);
        SessionHandle { id, writer: Mutex::new(Writer { live, log }), snapshot: RwLock::new(snapshot), updates }
    }

    fn replay(id: String, log: EventLog, records: &[Record]) -> Result<Self> {
        let Some((first, rest)) = records.split_first() else {
            return Err(ServiceError::BadRequest(format!("session {id}: empty log")));
        };
        let Event::Created { rule, h, candidates } = &first.event else {
            return Err(ServiceError::BadRequest(format!("session {id}: log does not start with creation")));
        };
        let mut live = Live::created(rule, *h, candidates)?;
        for r in rest {
            live = live.apply(&r.event)?;
        }
        Ok(SessionHandle::new(id, live, log))
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    fn snapshot(&self) -> Arc<Snapshot> {
        Arc::clone(&self.snapshot.read().expect("snapshot lock"))
    }

    pub fn view(&self) -> Arc<View> {
        Arc::clone(&self.snapshot().view)
    }

    pub fn subscribe(&self) -> broadcast::Receiver<Arc<View>> {
        self.updates.subscribe()
    }

    fn commit(&self, event: Event) -> Result<Arc<View>> {
        self.commit_with(|_| Ok(event))
    }

    /// Builds an event from the current state, validates it, appends it,
    /// then publishes the new state, all under the writer lock.
    fn commit_with(&self, make: impl FnOnce(&Live) -> Result<Event>) -> Result<Arc<View>> {
        let mut w = self.writer.lock().expect("writer lock");
        let event = make(&w.live)?;
        let next = w.live.apply(&event)?;
        let record = w.log.append(event)?;
        w.live = next;
        let view = Arc::new(w.live.view(&self.id, record.seq));
        *self.snapshot.write().expect("snapshot lock") =
            Arc::new(Snapshot { view: Arc::clone(&view), state: w.live.state.clone() });
        let _ = self.updates.send(Arc::clone(&view));
        Ok(view)
    }

    pub fn submit_candidate(&self, name: &str) -> Result<Arc<View>> {
        self.commit(Event::CandidateSubmitted { name: name.to_string() })
    }

    /// Registers a voter and returns its id and bearer token.
    pub fn join(&self) -> Result<(usize, String)> {
        let token = uuid::Uuid::new_v4().simple().to_string();
        let mut voter = 0;
        self.commit_with(|live| {
            voter = live.ballots.len();
            Ok(Event::VoterJoined { voter, token_sha256: token_digest(&token) })
        })?;
        Ok((voter, token))
    }

    pub fn cast_vote(&self, voter: usize, token: &str, candidate: &str, approve: bool) -> Result<Arc<View>> {
        let digest = token_digest(token);
        self.commit_with(|live| {
            if live.tokens.get(&digest) != Some(&voter) {
                return Err(ServiceError::Unauthorized);
            }
            Ok(Event::Vote { voter, candidate: candidate.to_string(), approve })
        })
    }

    pub fn implement(&self, candidate: &str) -> Result<Arc<View>> {
        self.commit(Event::Implemented { candidate: candidate.to_string() })
    }

    /// The ranking after hypothetically implementing `candidate`. Nothing is
    /// logged.
    pub fn preview(&self, candidate: &str) -> Result<Vec<Entry>> {
        let snap = self.snapshot();
        let c = snap.state.profile().id(candidate)?;
        let ranking = snap.state.preview(c)?;
        Ok(entries(snap.state.profile(), ranking.as_slice()))
    }

    pub fn history(&self) -> Result<History> {
        let snap = self.snapshot();
        let trajectory = TrajectoryDoc::from_trajectory(&snap.state.trajectory()?);
        let recorded = snap
            .state
            .history()
            .iter()
            .map(|HistoryEntry { ranking, implemented }| RecordedStep {
                ranking: ranking.clone(),
                implemented: implemented.clone(),
            })
            .collect();
        Ok(History { trajectory, recorded })
    }
}

/// All sessions under one data directory.
pub struct Store {
    dir: PathBuf,
    default_rule: RuleId,
    sessions: RwLock<HashMap<String, Arc<SessionHandle>>>,
}

impl Store {
    /// Creates `dir` if needed and replays every `*.ndjson` log in it.
    pub fn open(dir: &Path, default_rule: RuleId) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        let mut sessions = HashMap::new();
        for entry in std::fs::read_dir(dir)? {
            let path = entry?.path();
            if path.extension().and_then(|e| e.to_str()) != Some("ndjson") {
                continue;
            }
            let Some(id) = path.file_stem().and_then(|s| s.to_str()).map(String::from) else { continue };
            let (log, records) = EventLog::open(&path)?;
            let handle = SessionHandle::replay(id.clone(), log, &records)?;
            sessions.insert(id, Arc::new(handle));
        }
        Ok(Store { dir: dir.to_path_buf(), default_rule, sessions: RwLock::new(sessions) })
    }

    pub fn default_rule(&self) -> RuleId {
        self.default_rule
    }

    pub fn create(&self, rule: Option<RuleId>, h: Option<usize>, candidates: &[String]) -> Result<Arc<SessionHandle>> {
        let rule = rule.unwrap_or(self.default_rule).to_string();
        let live = Live::created(&rule, h, candidates)?;
        let id = uuid::Uuid::new_v4().simple().to_string();
        let mut log = EventLog::create(&self.dir.join(format!("{id}.ndjson")))?;
        log.append(Event::Created { rule, h, candidates: candidates.to_vec() })?;
        let handle = Arc::new(SessionHandle::new(id.clone(), live, log));
        self.sessions.write().expect("session map lock").insert(id, Arc::clone(&handle));
        Ok(handle)
    }

    pub fn get(&self, id: &str) -> Result<Arc<SessionHandle>> {
        self.sessions
            .read()
            .expect("session map lock")
            .get(id)
            .cloned()
            .ok_or_else(|| ServiceError::NotFound(format!("no session `{id}`")))
    }

    pub fn ids(&self) -> Vec<String> {
        let mut ids: Vec<String> = self.sessions.read().expect("session map lock").keys().cloned().collect();
        ids.sort();
        ids
    }
}
