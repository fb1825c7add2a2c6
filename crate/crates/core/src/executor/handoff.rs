// Copyright 2026 The mapsin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Stage-to-stage buffer. Each partition's mappings stay in memory unless
//! the stage output exceeds the spill threshold, in which case every
//! partition is written to its own anonymous temp file.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Seek, SeekFrom, Write};

use crate::rdf::Term;
use crate::sparql::{MappingMultiset, SolutionMapping, Variable};

enum Partition {
    Memory(MappingMultiset),
    Spilled { file: File, len: usize },
}

pub(crate) struct Handoff {
    partitions: Vec<Partition>,
}

fn write_bytes(out: &mut impl Write, bytes: &[u8]) -> io::Result<()> {
    out.write_all(&(bytes.len() as u32).to_be_bytes())?;
    out.write_all(bytes)
}

fn read_u32(input: &mut impl Read) -> io::Result<u32> {
    let mut buf = [0u8; 4];
    input.read_exact(&mut buf)?;
    Ok(u32::from_be_bytes(buf))
}

fn read_bytes(input: &mut impl Read) -> io::Result<Vec<u8>> {
    let len = read_u32(input)? as usize;
    let mut buf = vec![0u8; len];
    input.read_exact(&mut buf)?;
    Ok(buf)
}

fn invalid(why: &str) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, why.to_string())
}

fn spill(mappings: &MappingMultiset) -> io::Result<File> {
    let mut out = BufWriter::new(tempfile::tempfile()?);
    for m in mappings {
        out.write_all(&(m.len() as u32).to_be_bytes())?;
        for (v, t) in m.iter() {
            write_bytes(&mut out, v.name().as_bytes())?;
            write_bytes(&mut out, &t.encode())?;
        }
    }
    out.into_inner().map_err(|e| e.into_error())
}

fn unspill(file: &mut File, len: usize) -> io::Result<MappingMultiset> {
    file.seek(SeekFrom::Start(0))?;
    let mut input = BufReader::new(file);
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        let n = read_u32(&mut input)?;
        let mut pairs = Vec::with_capacity(n as usize);
        for _ in 0..n {
            let name =
                String::from_utf8(read_bytes(&mut input)?).map_err(|_| invalid("variable name"))?;
            let term = Term::decode(&read_bytes(&mut input)?).map_err(|_| invalid("term"))?;
            pairs.push((Variable::new(&name), term));
        }
        out.push(SolutionMapping::from_pairs(pairs).map_err(|_| invalid("duplicate binding"))?);
    }
    Ok(out.into())
}

impl Handoff {
    /// Takes a stage's output, spilling when it holds more than
    /// `spill_threshold` mappings in total.
    pub(crate) fn new(
        partitions: Vec<MappingMultiset>,
        spill_threshold: Option<usize>,
    ) -> io::Result<Handoff> {
        let total: usize = partitions.iter().map(MappingMultiset::len).sum();
        let do_spill = spill_threshold.is_some_and(|t| total > t);
        let partitions = partitions
            .into_iter()
            .map(|p| {
                if do_spill {
                    Ok(Partition::Spilled {
                        len: p.len(),
                        file: spill(&p)?,
                    })
                } else {
                    Ok(Partition::Memory(p))
                }
            })
            .collect::<io::Result<_>>()?;
        Ok(Handoff { partitions })
    }

    pub(crate) fn spilled(&self) -> usize {
        self.partitions
            .iter()
            .filter(|p| matches!(p, Partition::Spilled { .. }))
            .count()
    }

    /// Gives back the partitions in order.
    pub(crate) fn into_partitions(self) -> io::Result<Vec<MappingMultiset>> {
        self.partitions
            .into_iter()
            .map(|p| match p {
                Partition::Memory(m) => Ok(m),
                Partition::Spilled { mut file, len } => unspill(&mut file, len),
            })
            .collect()
    }
}
