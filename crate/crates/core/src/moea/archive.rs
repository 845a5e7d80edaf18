use serde::{Deserialize, Serialize};

use crate::genotype::Genome;
use crate::moea::Individual;
use crate::objectives::{dominates_slice, ObjectiveVector, SubsetScore};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArchiveMember {
    pub genome: Genome,
    pub objectives: ObjectiveVector,
    /// Validation metrics the objectives were derived from.
    pub validation: SubsetScore,
}

impl From<&Individual> for ArchiveMember {
    fn from(ind: &Individual) -> Self {
        ArchiveMember {
            genome: ind.genome.clone(),
            objectives: ind.objectives.clone(),
            validation: ind.score,
        }
    }
}

/// Mutually non-dominated members, unique by bitstring and kept sorted by it.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ParetoArchive {
    members: Vec<ArchiveMember>,
}

impl ParetoArchive {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_population(pop: &[Individual]) -> Self {
        let mut archive = Self::new();
        for ind in pop {
            archive.insert(ArchiveMember::from(ind));
        }
        archive
    }

    /// Adds `candidate` unless it is dominated or already present; evicts
    /// members it dominates. Returns whether it was added.
    pub fn insert(&mut self, candidate: ArchiveMember) -> bool {
        let f = &candidate.objectives.0;
        if self
            .members
            .iter()
            .any(|m| m.genome == candidate.genome || dominates_slice(&m.objectives.0, f))
        {
            return false;
        }
        self.members.retain(|m| !dominates_slice(f, &m.objectives.0));
        let at = self
            .members
            .binary_search_by(|m| m.genome.cmp(&candidate.genome))
            .unwrap_err();
        self.members.insert(at, candidate);
        true
    }

    pub fn members(&self) -> &[ArchiveMember] {
        &self.members
    }

    pub fn into_members(self) -> Vec<ArchiveMember> {
        self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}
