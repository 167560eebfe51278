//! On-disk result cache.
//!
//! Each entry is a data file plus a `.sha256` file holding the hex digest of
//! the data. Keys include the package version, so entries written by another
//! version are never read. An entry whose digest does not match is treated
//! as missing and rewritten.

use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn open(dir: &Path) -> io::Result<Cache> {
        fs::create_dir_all(dir)?;
        Ok(Cache {
            dir: dir.to_path_buf(),
        })
    }

    pub fn key(command: &str, family: &str, n: usize, variant: &str) -> String {
        format!("{command}-{family}-{n}-{variant}-v{VERSION}")
    }

    fn data_path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.data"))
    }

    fn digest_path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.sha256"))
    }

    /// Path of a verified entry, or `None` when absent or corrupt.
    pub fn lookup(&self, key: &str) -> Option<PathBuf> {
        let data = self.data_path(key);
        let expected = fs::read_to_string(self.digest_path(key)).ok()?;
        let actual = hash_file(&data).ok()?;
        if expected.trim() == actual {
            Some(data)
        } else {
            eprintln!("cache entry {key} failed its content check; recomputing");
            None
        }
    }

    /// Copies a verified entry to `out`.
    pub fn replay(&self, key: &str, out: &mut dyn Write) -> io::Result<bool> {
        match self.lookup(key) {
            Some(path) => {
                io::copy(&mut BufReader::new(File::open(path)?), out)?;
                Ok(true)
            }
            None => Ok(false),
        }
    }

    /// Starts a new entry; nothing is visible under `key` until
    /// [`Entry::commit`].
    pub fn begin(&self, key: &str) -> io::Result<Entry> {
        let tmp = self.dir.join(format!("{key}.{}.tmp", std::process::id()));
        Ok(Entry {
            file: BufWriter::new(File::create(&tmp)?),
            hasher: Sha256::new(),
            tmp,
            data: self.data_path(key),
            digest: self.digest_path(key),
        })
    }

    pub fn store(&self, key: &str, bytes: &[u8]) -> io::Result<()> {
        let mut e = self.begin(key)?;
        e.write_all(bytes)?;
        e.commit()
    }
}

pub struct Entry {
    file: BufWriter<File>,
    hasher: Sha256,
    tmp: PathBuf,
    data: PathBuf,
    digest: PathBuf,
}

impl Write for Entry {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        let n = self.file.write(buf)?;
        self.hasher.update(&buf[..n]);
        Ok(n)
    }

    fn flush(&mut self) -> io::Result<()> {
        self.file.flush()
    }
}

impl Entry {
    pub fn commit(mut self) -> io::Result<()> {
        self.file.flush()?;
        let digest = hex::encode(self.hasher.finalize());
        fs::rename(&self.tmp, &self.data)?;
        fs::write(&self.digest, format!("{digest}\n"))
    }
}

pub fn hash_file(path: &Path) -> io::Result<String> {
    let mut reader = BufReader::new(File::open(path)?);
    let mut hasher = Sha256::new();
    let mut buf = vec![0; 1 << 16];
    loop {
        let n = reader.read(&mut buf)?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
    }
    Ok(hex::encode(hasher.finalize()))
}

/// Writes everything to two sinks.
pub struct Tee<'a, A: Write + ?Sized, B: Write + ?Sized> {
    pub first: &'a mut A,
    pub second: &'a mut B,
}

impl<A: Write + ?Sized, B: Write + ?Sized> Write for Tee<'_, A, B> {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        self.first.write_all(buf)?;
        self.second.write_all(buf)?;
        Ok(buf.len())
    }

    fn flush(&mut self) -> io::Result<()> {
        self.first.flush()?;
        self.second.flush()
    }
}
