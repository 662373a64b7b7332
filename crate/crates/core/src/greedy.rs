//! Capacity-constrained lazy greedy coverage maximization.
//!
//! Each expert may be used at most `capacity` times. Candidates live in a
//! max-heap keyed by a possibly stale gain; a per-task version stamp tells
//! whether the key is still exact. Because coverage is submodular, a stale
//! key is an upper bound on the true gain, so the first fresh entry popped
//! is a true maximizer.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::model::{Assignment, Fraction, Instance};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Candidate {
    gain: Fraction,
    expert: u32,
    task: u32,
    stamp: u32,
}

impl Ord for Candidate {
    // Max-heap: larger gain first, then smaller (expert, task).
    fn cmp(&self, other: &Self) -> Ordering {
        self.gain
            .cmp(&other.gain)
            .then_with(|| other.expert.cmp(&self.expert))
            .then_with(|| other.task.cmp(&self.task))
            .then_with(|| self.stamp.cmp(&other.stamp))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A greedy run that can be resumed at a higher capacity.
#[derive(Clone, Debug)]
pub struct GreedyState<'a> {
    instance: &'a Instance,
    assignment: Assignment,
    capacity: u32,
    versions: Vec<u32>,
    queue: BinaryHeap<Candidate>,
    // Entries popped while their expert had no capacity left.
    parked: Vec<Candidate>,
    log: Vec<(u32, u32)>,
    // marks[c - 1] = log length once the run at capacity c finished.
    marks: Vec<usize>,
}

impl<'a> GreedyState<'a> {
    /// Runs greedy to completion at capacity `tau`.
    pub fn new(instance: &'a Instance, tau: u32) -> Self {
        let mut queue = Vec::new();
        for (j, experts) in instance.relevant_experts().into_iter().enumerate() {
            for i in experts {
                let gain = instance.static_gain(i as usize, j);
                if !gain.is_zero() {
                    queue.push(Candidate {
                        gain,
                        expert: i,
                        task: j as u32,
                        stamp: 0,
                    });
                }
            }
        }
        let mut state = GreedyState {
            instance,
            assignment: Assignment::new(instance),
            capacity: 0,
            versions: vec![0; instance.num_tasks()],
            queue: BinaryHeap::from(queue),
            parked: Vec::new(),
            log: Vec::new(),
            marks: Vec::new(),
        };
        for _ in 0..tau {
            state.extend_capacity();
        }
        state
    }

    /// Grants every expert one more use and resumes the greedy. The result
    /// is a superset of the previous assignment.
    pub fn extend_capacity(&mut self) {
        self.capacity += 1;
        self.queue.extend(self.parked.drain(..));
        self.run();
        self.marks.push(self.log.len());
    }

    fn run(&mut self) {
        while let Some(top) = self.queue.pop() {
            let (i, j) = (top.expert as usize, top.task as usize);
            if self.assignment.load(i) >= self.capacity {
                self.parked.push(top);
                continue;
            }
            if top.stamp != self.versions[j] {
                let gain = self.assignment.marginal_gain(self.instance, i, j);
                if !gain.is_zero() {
                    self.queue.push(Candidate {
                        gain,
                        stamp: self.versions[j],
                        ..top
                    });
                }
                continue;
            }
            self.assignment.insert(self.instance, i, j);
            self.versions[j] += 1;
            self.log.push((top.expert, top.task));
        }
    }

    pub fn capacity(&self) -> u32 {
        self.capacity
    }

    pub fn assignment(&self) -> &Assignment {
        &self.assignment
    }

    pub fn into_assignment(self) -> Assignment {
        self.assignment
    }

    /// Pairs in the order they were added.
    pub fn added(&self) -> &[(u32, u32)] {
        &self.log
    }

    /// The assignment this chain held right after the run at capacity `tau`
    /// (`tau ≤ capacity`); `tau = 0` gives the empty assignment.
    pub fn assignment_at(&self, tau: u32) -> Assignment {
        assert!(tau <= self.capacity, "capacity {tau} not reached yet");
        let end = if tau == 0 { 0 } else { self.marks[tau as usize - 1] };
        Assignment::from_pairs(
            self.instance,
            self.log[..end].iter().map(|&(i, j)| (i as usize, j as usize)),
        )
    }
}

/// Fresh greedy run with per-expert capacity `tau`.
pub fn greedy_cover(instance: &Instance, tau: u32) -> Assignment {
    GreedyState::new(instance, tau).into_assignment()
}
