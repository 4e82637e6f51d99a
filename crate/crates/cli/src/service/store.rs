//! In-memory session store with idle expiry and a size cap.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, RwLock};
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use planadv_core::dialogue::DialogueSession;

pub struct SessionRecord {
    pub id: String,
    pub created_at: SystemTime,
    activity: Mutex<(Instant, SystemTime)>,
    /// Held for the duration of a move; a second move finds it locked.
    pub session: tokio::sync::Mutex<DialogueSession>,
}

impl SessionRecord {
    fn touch(&self) {
        *self.activity.lock().unwrap() = (Instant::now(), SystemTime::now());
    }

    fn idle(&self) -> Duration {
        self.activity.lock().unwrap().0.elapsed()
    }

    pub fn last_activity(&self) -> SystemTime {
        self.activity.lock().unwrap().1
    }
}

pub fn unix_seconds(t: SystemTime) -> u64 {
    t.duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

pub struct SessionStore {
    sessions: RwLock<HashMap<String, Arc<SessionRecord>>>,
    ttl: Duration,
    max_sessions: usize,
}

impl SessionStore {
    pub fn new(ttl: Duration, max_sessions: usize) -> Self {
        SessionStore {
            sessions: RwLock::new(HashMap::new()),
            ttl,
            max_sessions: max_sessions.max(1),
        }
    }

    /// Stores a new session, evicting expired ones and then, if still at
    /// capacity, the least recently active.
    pub fn insert(&self, session: DialogueSession) -> Arc<SessionRecord> {
        let now = (Instant::now(), SystemTime::now());
        let record = Arc::new(SessionRecord {
            id: uuid::Uuid::new_v4().simple().to_string(),
            created_at: now.1,
            activity: Mutex::new(now),
            session: tokio::sync::Mutex::new(session),
        });
        let mut map = self.sessions.write().unwrap();
        map.retain(|_, r| r.idle() < self.ttl);
        while map.len() >= self.max_sessions {
            let oldest = map.iter().max_by_key(|(_, r)| r.idle()).map(|(id, _)| id.clone());
            match oldest {
                Some(id) => map.remove(&id),
                None => break,
            };
        }
        map.insert(record.id.clone(), record.clone());
        record
    }

    /// Looks up a live session and marks it active.
    pub fn get(&self, id: &str) -> Option<Arc<SessionRecord>> {
        let record = self.sessions.read().unwrap().get(id).cloned()?;
        if record.idle() >= self.ttl {
            self.sessions.write().unwrap().remove(id);
            return None;
        }
        record.touch();
        Some(record)
    }

    pub fn remove(&self, id: &str) -> bool {
        self.sessions.write().unwrap().remove(id).is_some()
    }

    /// Drops every expired session, returning how many went.
    pub fn evict_expired(&self) -> usize {
        let mut map = self.sessions.write().unwrap();
        let before = map.len();
        map.retain(|_, r| r.idle() < self.ttl);
        before - map.len()
    }

    pub fn len(&self) -> usize {
        self.sessions.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn ttl(&self) -> Duration {
        self.ttl
    }
}
