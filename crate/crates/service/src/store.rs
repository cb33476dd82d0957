//! Document persistence. One JSON document per model or project.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Collection {
    Models,
    Projects,
}

impl Collection {
    pub fn as_str(self) -> &'static str {
        match self {
            Collection::Models => "models",
            Collection::Projects => "projects",
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("`{0}` is not a usable document id")]
    InvalidId(String),
    #[error("storage failure: {0}")]
    Io(#[from] std::io::Error),
}

/// Ids become file names, so they are kept to a safe alphabet.
pub fn is_valid_id(id: &str) -> bool {
    !id.is_empty()
        && id.len() <= 128
        && !id.starts_with('.')
        && id
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'))
}

fn check(id: &str) -> Result<(), StoreError> {
    if is_valid_id(id) {
        Ok(())
    } else {
        Err(StoreError::InvalidId(id.to_string()))
    }
}

pub trait DocumentStore: Send + Sync {
    fn get(&self, collection: Collection, id: &str) -> Result<Option<String>, StoreError>;
    fn put(&self, collection: Collection, id: &str, document: &str) -> Result<(), StoreError>;
    /// `Ok(false)` when there was nothing to delete.
    fn delete(&self, collection: Collection, id: &str) -> Result<bool, StoreError>;
    /// Ids in ascending order.
    fn list(&self, collection: Collection) -> Result<Vec<String>, StoreError>;
}

#[derive(Debug, Default)]
pub struct MemoryStore {
    docs: Mutex<BTreeMap<(Collection, String), String>>,
}

impl MemoryStore {
    pub fn new() -> Self {
        Self::default()
    }
}

impl DocumentStore for MemoryStore {
    fn get(&self, collection: Collection, id: &str) -> Result<Option<String>, StoreError> {
        Ok(self.docs.lock().unwrap().get(&(collection, id.to_string())).cloned())
    }

    fn put(&self, collection: Collection, id: &str, document: &str) -> Result<(), StoreError> {
        check(id)?;
        self.docs
            .lock()
            .unwrap()
            .insert((collection, id.to_string()), document.to_string());
        Ok(())
    }

    fn delete(&self, collection: Collection, id: &str) -> Result<bool, StoreError> {
        Ok(self
            .docs
            .lock()
            .unwrap()
            .remove(&(collection, id.to_string()))
            .is_some())
    }

    fn list(&self, collection: Collection) -> Result<Vec<String>, StoreError> {
        Ok(self
            .docs
            .lock()
            .unwrap()
            .keys()
            .filter(|(c, _)| *c == collection)
            .map(|(_, id)| id.clone())
            .collect())
    }
}

/// `<root>/<collection>/<id>.json`. Writes go to a temporary file that is
/// renamed into place; writes to the same document are serialized.
#[derive(Debug)]
pub struct FileStore {
    root: PathBuf,
    locks: Mutex<HashMap<(Collection, String), Arc<Mutex<()>>>>,
}

impl FileStore {
    pub fn open(root: impl Into<PathBuf>) -> Result<Self, StoreError> {
        let root = root.into();
        for c in [Collection::Models, Collection::Projects] {
            std::fs::create_dir_all(root.join(c.as_str()))?;
        }
        Ok(Self {
            root,
            locks: Mutex::default(),
        })
    }

    fn path(&self, collection: Collection, id: &str) -> PathBuf {
        self.root.join(collection.as_str()).join(format!("{id}.json"))
    }

    fn lock_for(&self, collection: Collection, id: &str) -> Arc<Mutex<()>> {
        self.locks
            .lock()
            .unwrap()
            .entry((collection, id.to_string()))
            .or_default()
            .clone()
    }
}

impl DocumentStore for FileStore {
    fn get(&self, collection: Collection, id: &str) -> Result<Option<String>, StoreError> {
        if !is_valid_id(id) {
            return Ok(None);
        }
        match std::fs::read_to_string(self.path(collection, id)) {
            Ok(doc) => Ok(Some(doc)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    fn put(&self, collection: Collection, id: &str, document: &str) -> Result<(), StoreError> {
        check(id)?;
        let lock = self.lock_for(collection, id);
        let _guard = lock.lock().unwrap();
        let target = self.path(collection, id);
        let staging = target.with_extension("json.tmp");
        let mut file = std::fs::File::create(&staging)?;
        file.write_all(document.as_bytes())?;
        file.sync_all()?;
        std::fs::rename(&staging, &target)?;
        Ok(())
    }

    fn delete(&self, collection: Collection, id: &str) -> Result<bool, StoreError> {
        if !is_valid_id(id) {
            return Ok(false);
        }
        let lock = self.lock_for(collection, id);
        let _guard = lock.lock().unwrap();
        match std::fs::remove_file(self.path(collection, id)) {
            Ok(()) => Ok(true),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(false),
            Err(e) => Err(e.into()),
        }
    }

    fn list(&self, collection: Collection) -> Result<Vec<String>, StoreError> {
        let mut ids = Vec::new();
        for entry in std::fs::read_dir(self.root.join(collection.as_str()))? {
            let name = entry?.file_name();
            if let Some(id) = name.to_str().and_then(|n| n.strip_suffix(".json")) {
                ids.push(id.to_string());
            }
        }
        ids.sort();
        Ok(ids)
    }
}
