//! The branch-and-bound search: node selection (best-first until the active
//! set outgrows MaxDepth, then depth-first), branching heuristics, pruning
//! against the incumbent, and ε-optimal termination with a certificate.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use nalgebra::DVector;
use ordered_float::NotNan;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds;
use crate::error::{Error, Result};
use crate::linalg::{gen_eig_max, restricted_gen_eig_max, submatrix};
use crate::problem::{Branching, Certificate, Node, SgepProblem, SolverOptions, SolverStatus};

/// One row of the optional iteration trace: state after an expansion.
#[derive(Debug, Clone, Copy)]
pub struct TraceRecord {
    pub explored: u64,
    pub lb: f64,
    pub ub: f64,
    /// 0-based coordinate the expansion branched on.
    pub branch_index: usize,
}

/// Open nodes, indexed both by creation order (recency) and by upper bound
/// (best-first with earliest-created tie-break).
#[derive(Debug, Default)]
struct ActiveSet {
    by_created: BTreeMap<u64, Node>,
    by_upper: BTreeSet<(NotNan<f64>, Reverse<u64>)>,
}

impl ActiveSet {
    fn len(&self) -> usize {
        self.by_created.len()
    }

    fn insert(&mut self, node: Node) {
        let key = (NotNan::new(node.upper).expect("finite upper bound"), Reverse(node.created));
        self.by_upper.insert(key);
        self.by_created.insert(node.created, node);
    }

    fn max_upper(&self) -> Option<f64> {
        self.by_upper.last().map(|(u, _)| u.into_inner())
    }

    /// Node with the greatest upper bound; earliest-created wins ties.
    fn pop_best(&mut self) -> Option<Node> {
        let key = *self.by_upper.last()?;
        self.by_upper.remove(&key);
        self.by_created.remove(&key.1 .0)
    }

    /// Most recently added node.
    fn pop_newest(&mut self) -> Option<Node> {
        let (&created, _) = self.by_created.last_key_value()?;
        let node = self.by_created.remove(&created)?;
        self.by_upper
            .remove(&(NotNan::new(node.upper).expect("finite upper bound"), Reverse(created)));
        Some(node)
    }

    /// Drop every node whose upper bound is ≤ `lb`.
    fn prune(&mut self, lb: f64) {
        while let Some(&key) = self.by_upper.first() {
            if key.0.into_inner() > lb {
                break;
            }
            self.by_upper.remove(&key);
            self.by_created.remove(&key.1 .0);
        }
    }
}

/// Mutable state of one search.
pub struct SearchState {
    active: ActiveSet,
    pub incumbent: DVector<f64>,
    pub lb: f64,
    pub ub: f64,
    pub explored: u64,
    created: u64,
    clock: Instant,
}

impl SearchState {
    pub fn active_len(&self) -> usize {
        self.active.len()
    }

    /// Two-phase node selection: best-first while the active set is smaller
    /// than `max_depth`, depth-first (most recent) once it is not.
    pub fn select_node(&mut self, max_depth: usize) -> Result<Node> {
        let picked = if self.active.len() < max_depth {
            self.active.pop_best()
        } else {
            self.active.pop_newest()
        };
        picked.ok_or(Error::EmptyActiveSet)
    }
}

/// Coordinate to branch on among the free set {i : l_i = 0, u_i = 1}.
/// Ties always go to the smallest index.
pub fn select_branch_index(
    problem: &SgepProblem,
    node: &Node,
    strategy: Branching,
    rng: &mut ChaCha8Rng,
) -> Result<usize> {
    let free = node.free();
    if free.is_empty() {
        return Err(Error::NoFreeIndex);
    }
    let pick = match strategy {
        Branching::Random => free[rng.random_range(0..free.len())],
        Branching::DiagRatio => {
            let a = problem.a();
            let b = problem.b();
            let mut best = free[0];
            let mut best_ratio = f64::NEG_INFINITY;
            for &i in &free {
                let ratio = a[(i, i)] / b[(i, i)];
                if ratio > best_ratio {
                    best_ratio = ratio;
                    best = i;
                }
            }
            best
        }
        Branching::RestrictedEig => {
            let a_f = submatrix(problem.a(), &free);
            let b_f = submatrix(problem.b(), &free);
            let (_, v) = gen_eig_max(&a_f, &b_f)?;
            let mut best = 0;
            for j in 1..v.len() {
                if v[j].abs() > v[best].abs() {
                    best = j;
                }
            }
            free[best]
        }
        Branching::GlobalEig => {
            let v_max = problem.pencil_max_vector();
            let mut best = free[0];
            let mut best_load = f64::NEG_INFINITY;
            for &i in &free {
                if v_max[i].abs() > best_load {
                    best_load = v_max[i].abs();
                    best = i;
                }
            }
            best
        }
    };
    Ok(pick)
}

/// Solves the problem to ε-optimality and returns the certificate.
pub fn solve(problem: &SgepProblem, options: &SolverOptions) -> Result<Certificate> {
    solve_traced(problem, options, |_| {})
}

/// Like [`solve`], invoking `on_expand` once per expansion with the state
/// after the global bounds were refreshed.
pub fn solve_traced(
    problem: &SgepProblem,
    options: &SolverOptions,
    on_expand: impl FnMut(&TraceRecord),
) -> Result<Certificate> {
    solve_inner(problem, options, true, on_expand)
}

/// Iteration caps of the one-off root initialization. The per-node caps
/// (`n1`, `n2`) are deliberately tiny, but the initial incumbent sets the
/// pruning power of the whole search, so the root run goes to convergence.
const ROOT_RIFLE_ITERS: usize = 600;
const ROOT_ADMM_ITERS: usize = 25;

fn solve_inner(
    problem: &SgepProblem,
    options: &SolverOptions,
    pruning: bool,
    mut on_expand: impl FnMut(&TraceRecord),
) -> Result<Certificate> {
    options.validate()?;
    let p = problem.dim();
    let k = problem.k();
    let epsilon = problem.epsilon();
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let clock = Instant::now();

    // Root: incumbent from a converged Rifle run, ub from the full pencil.
    let mut root = Node::root(p);
    let root_options = SolverOptions {
        n1: options.n1.max(ROOT_RIFLE_ITERS),
        n2: options.n2.max(ROOT_ADMM_ITERS),
        ..options.clone()
    };
    let (root_lb, root_witness) = bounds::lower(problem, &root, None, &root_options);
    let root_ub = problem.pencil_max_value().max(root_lb);
    root.lower = root_lb;
    root.upper = root_ub;
    root.ub1 = problem.pencil_max_value();
    root.incumbent = Some(root_witness.clone());

    let mut state = SearchState {
        active: ActiveSet::default(),
        incumbent: root_witness,
        lb: root_lb,
        ub: root_ub,
        explored: 0,
        created: 1,
        clock,
    };
    state.active.insert(root);
    let mut time_to_lower = state.clock.elapsed().as_secs_f64();

    let status = loop {
        let gap = state.ub - state.lb;
        if gap <= epsilon {
            break if gap <= 1e-12 * (1.0 + state.lb.abs()) {
                SolverStatus::Optimal
            } else {
                SolverStatus::GapReached
            };
        }
        if options.node_limit.is_some_and(|cap| state.explored >= cap) {
            break SolverStatus::NodeLimit;
        }
        if options
            .time_limit
            .is_some_and(|cap| state.clock.elapsed().as_secs_f64() >= cap)
        {
            break SolverStatus::TimeLimit;
        }
        let Ok(node) = state.select_node(options.max_depth) else {
            // no subproblem left: the incumbent is exactly optimal
            state.ub = state.lb;
            break SolverStatus::Optimal;
        };
        state.explored += 1;

        let branch_index = select_branch_index(problem, &node, options.branching, &mut rng)?;

        // The w_i = 1 child first: fixing a variable in tends to improve
        // the incumbent sooner.
        for val in [true, false] {
            let mut child = node.child(branch_index, val, state.created);
            state.created += 1;
            if !child.is_feasible(k) {
                continue;
            }
            let witness;
            let solved_exactly = child.support_pinned(k);
            if let Some(support) = &solved_exactly {
                // fixed support: solve the restricted pencil exactly
                let (value, v) = restricted_gen_eig_max(problem.a(), problem.b(), support)?;
                child.lower = value;
                child.upper = value;
                witness = v;
            } else {
                // Stage the bounds cheapest-first: a child whose upper bound
                // already sits at or below the incumbent is discarded either
                // way, so it never pays for the eigenproblem or the
                // Rifle/ADMM lower-bound work (lower ≤ upper ≤ lb cannot
                // improve the incumbent). The w_i = 1 child shares the
                // parent's u, hence its cached restricted-pencil bound.
                let cheap = bounds::upper_bound_2(problem, &child)
                    .min(bounds::upper_bound_3(problem, &child));
                if pruning && cheap.min(child.ub1) <= state.lb {
                    continue;
                }
                if !child.ub1.is_finite() {
                    child.ub1 = bounds::upper_bound_1(problem, &child)?;
                }
                let upper = cheap.min(child.ub1);
                if pruning && upper <= state.lb {
                    continue;
                }
                let (lower, w) = bounds::lower(problem, &child, Some(&state.incumbent), options);
                child.lower = lower;
                child.upper = upper;
                witness = w;
            }
            child.incumbent = Some(witness.clone());
            if child.lower > state.lb {
                state.lb = child.lower;
                state.incumbent = witness;
                time_to_lower = state.clock.elapsed().as_secs_f64();
                if pruning {
                    state.active.prune(state.lb);
                }
            }
            // exactly solved nodes are never re-expanded
            if (!pruning || child.upper > state.lb) && solved_exactly.is_none() {
                state.active.insert(child);
            }
        }

        state.ub = state.active.max_upper().unwrap_or(state.lb).max(state.lb);
        on_expand(&TraceRecord {
            explored: state.explored,
            lb: state.lb,
            ub: state.ub,
            branch_index,
        });
    };

    Ok(Certificate {
        objective: state.lb,
        v_hat: state.incumbent,
        global_upper: state.ub,
        gap: state.ub - state.lb,
        nodes_explored: state.explored,
        time_to_lower,
        time_to_upper: state.clock.elapsed().as_secs_f64(),
        status,
    })
}
