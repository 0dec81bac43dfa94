//! The partition-witness characterization of realizable HN-vectors, and the
//! cross-check between the witness route and the stratum route.
//!
//! A witness for a candidate vector with block values `lb_1 > ... > lb_r`
//! and block sizes `d_1, ..., d_r` consists of partitions of the summand
//! indices `[1,l]` and the entry indices `[1,d]` into `r` non-empty groups
//! such that for each group: the entry count matches the summand dimensions
//! (`|J_i| = d_i = sum of s_k over I_i`), the sorted Hodge values of `J_i`
//! dominate the sorted slope entries of `I_i`, and the group's total slope
//! excess equals `lb_i * d_i`.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::isocrystal::{stab_mu, stab_nu, HodgeData, NewtonData};
use crate::perm::{perm_from_table, Composition};
use crate::rational::{dominance_geq, Rat, RatTuple};
use crate::strata::{build_stratum, hn_vector, in_gamma, HNVector, Stratum};

/// Witness data: groups of summand indices, groups of entry indices, and
/// the strictly decreasing slope values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    i_parts: Vec<Vec<usize>>,
    j_parts: Vec<Vec<usize>>,
    lambda_bars: Vec<Rat>,
}

impl Witness {
    pub fn new(
        i_parts: Vec<Vec<usize>>,
        j_parts: Vec<Vec<usize>>,
        lambda_bars: Vec<Rat>,
    ) -> Witness {
        Witness {
            i_parts,
            j_parts,
            lambda_bars,
        }
    }

    pub fn r(&self) -> usize {
        self.i_parts.len()
    }

    pub fn i_parts(&self) -> &[Vec<usize>] {
        &self.i_parts
    }

    pub fn j_parts(&self) -> &[Vec<usize>] {
        &self.j_parts
    }

    pub fn lambda_bars(&self) -> &[Rat] {
        &self.lambda_bars
    }

    pub fn hn_vector(&self) -> Result<HNVector> {
        let mults: Vec<usize> = self.j_parts.iter().map(|j| j.len()).collect();
        HNVector::from_blocks(&self.lambda_bars, &mults)
    }

    pub fn to_record(&self) -> WitnessRecord {
        WitnessRecord {
            r: self.r(),
            i: self.i_parts.clone(),
            j: self.j_parts.clone(),
            lambda_bars: self.lambda_bars.clone(),
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fmt_parts = |parts: &[Vec<usize>]| {
            parts
                .iter()
                .map(|p| {
                    let inner = p
                        .iter()
                        .map(|k| k.to_string())
                        .collect::<Vec<_>>()
                        .join(",");
                    format!("{{{}}}", inner)
                })
                .collect::<Vec<_>>()
                .join(", ")
        };
        write!(
            f,
            "I = {}; J = {}; slopes = {}",
            fmt_parts(&self.i_parts),
            fmt_parts(&self.j_parts),
            self.lambda_bars
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        )
    }
}

/// JSON shape of a witness.
#[derive(Debug, Clone, Serialize)]
pub struct WitnessRecord {
    pub r: usize,
    #[serde(rename = "I")]
    pub i: Vec<Vec<usize>>,
    #[serde(rename = "J")]
    pub j: Vec<Vec<usize>>,
    pub lambda_bars: Vec<Rat>,
}

fn nu_block(i_part: &[usize], n: &NewtonData) -> RatTuple {
    let mut entries = Vec::new();
    for &k in i_part {
        for _ in 0..n.block_sizes()[k - 1] {
            entries.push(n.simple_slopes()[k - 1].clone());
        }
    }
    RatTuple::new(entries).sort_desc()
}

fn mu_block(j_part: &[usize], h: &HodgeData) -> RatTuple {
    RatTuple::new(j_part.iter().map(|&k| h.mu_tuple()[k - 1].clone()).collect()).sort_desc()
}

/// Re-validates every condition of a witness independently of how it was
/// found: both families are partitions into non-empty groups, entry counts
/// match summand dimensions, each group's sorted Hodge values dominate its
/// sorted slopes, the slope values are consistent and strictly decreasing.
pub fn validate_witness(wit: &Witness, n: &NewtonData, h: &HodgeData) -> Result<()> {
    let r = wit.r();
    if r == 0 || wit.j_parts.len() != r || wit.lambda_bars.len() != r {
        return Err(Error::InvalidWitness("group counts disagree".into()));
    }
    let check_partition = |parts: &[Vec<usize>], total: usize, name: &str| -> Result<()> {
        let mut seen = vec![false; total];
        for part in parts {
            if part.is_empty() {
                return Err(Error::InvalidWitness(format!("empty {} group", name)));
            }
            for &k in part {
                if k < 1 || k > total || seen[k - 1] {
                    return Err(Error::InvalidWitness(format!(
                        "{} groups are not a partition of 1..{}",
                        name, total
                    )));
                }
                seen[k - 1] = true;
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::InvalidWitness(format!(
                "{} groups do not cover 1..{}",
                name, total
            )));
        }
        Ok(())
    };
    check_partition(&wit.i_parts, n.l(), "summand")?;
    check_partition(&wit.j_parts, n.d(), "entry")?;
    for i in 0..r {
        let nu_i = nu_block(&wit.i_parts[i], n);
        let mu_i = mu_block(&wit.j_parts[i], h);
        let d_i = nu_i.len();
        if wit.j_parts[i].len() != d_i {
            return Err(Error::InvalidWitness(format!(
                "group {}: |J| = {} but summand dimensions total {}",
                i + 1,
                wit.j_parts[i].len(),
                d_i
            )));
        }
        if !dominance_geq(&mu_i, &nu_i)? {
            return Err(Error::InvalidWitness(format!(
                "group {}: {} does not dominate {}",
                i + 1,
                mu_i,
                nu_i
            )));
        }
        let expected = &(&mu_i.total() - &nu_i.total()) / &Rat::from_int(d_i as i64);
        if wit.lambda_bars[i] != expected {
            return Err(Error::InvalidWitness(format!(
                "group {}: slope value {} != {}",
                i + 1,
                wit.lambda_bars[i],
                expected
            )));
        }
    }
    for pair in wit.lambda_bars.windows(2) {
        if pair[0] <= pair[1] {
            return Err(Error::InvalidWitness(
                "slope values are not strictly decreasing".into(),
            ));
        }
    }
    Ok(())
}

/// Search target: either a fixed block profile (check mode) or none
/// (enumerate mode, slope values derived on the fly).
struct SearchTarget<'a> {
    values: &'a [Rat],
    sizes: &'a [usize],
}

/// Labeled-partition search over summand assignments and entry groups.
/// `prune` controls the mid-branch cuts; the unpruned variant exists as a
/// test oracle and must find exactly the same witnesses.
fn search_witnesses(
    n: &NewtonData,
    h: &HodgeData,
    target: Option<&SearchTarget<'_>>,
    prune: bool,
    on_found: &mut dyn FnMut(Witness) -> bool,
) {
    let l = n.l();
    let d = n.d();
    let r_range: Vec<usize> = match target {
        Some(t) => vec![t.values.len()],
        None => (1..=l.min(d)).collect(),
    };
    for r in r_range {
        let mut assign = vec![0usize; l]; // summand k -> group (0-based)
        let mut group_dims = vec![0usize; r];
        assign_summands(
            n, h, target, prune, r, 1, &mut assign, &mut group_dims, on_found,
        );
    }
}

#[allow(clippy::too_many_arguments)]
fn assign_summands(
    n: &NewtonData,
    h: &HodgeData,
    target: Option<&SearchTarget<'_>>,
    prune: bool,
    r: usize,
    summand: usize,
    assign: &mut Vec<usize>,
    group_dims: &mut Vec<usize>,
    on_found: &mut dyn FnMut(Witness) -> bool,
) -> bool {
    let l = n.l();
    if summand > l {
        if group_dims.iter().any(|&g| g == 0) {
            return true; // some group empty
        }
        if let Some(t) = target {
            if group_dims != t.sizes {
                return true;
            }
        }
        let mut i_parts: Vec<Vec<usize>> = vec![Vec::new(); r];
        for (k, &g) in assign.iter().enumerate() {
            i_parts[g].push(k + 1);
        }
        return choose_entry_groups(n, h, target, prune, &i_parts, on_found);
    }
    let s_k = n.block_sizes()[summand - 1];
    for g in 0..r {
        // condition-2 pruning: a group may never exceed its forced size
        if prune {
            if let Some(t) = target {
                if group_dims[g] + s_k > t.sizes[g] {
                    continue;
                }
            }
        }
        assign[summand - 1] = g;
        group_dims[g] += s_k;
        let cont = assign_summands(
            n,
            h,
            target,
            prune,
            r,
            summand + 1,
            assign,
            group_dims,
            on_found,
        );
        group_dims[g] -= s_k;
        if !cont {
            return false;
        }
    }
    true
}

fn choose_entry_groups(
    n: &NewtonData,
    h: &HodgeData,
    target: Option<&SearchTarget<'_>>,
    prune: bool,
    i_parts: &[Vec<usize>],
    on_found: &mut dyn FnMut(Witness) -> bool,
) -> bool {
    let d = n.d();
    let nu_blocks: Vec<RatTuple> = i_parts.iter().map(|p| nu_block(p, n)).collect();
    let dims: Vec<usize> = nu_blocks.iter().map(|b| b.len()).collect();
    debug_assert_eq!(dims.iter().sum::<usize>(), d);
    let mut remaining: Vec<usize> = (1..=d).collect();
    let mut j_parts: Vec<Vec<usize>> = Vec::new();
    let mut lambda_bars: Vec<Rat> = Vec::new();
    rec_entry_groups(
        n,
        h,
        target,
        prune,
        i_parts,
        &nu_blocks,
        &dims,
        0,
        &mut remaining,
        &mut j_parts,
        &mut lambda_bars,
        on_found,
    )
}

#[allow(clippy::too_many_arguments)]
fn rec_entry_groups(
    n: &NewtonData,
    h: &HodgeData,
    target: Option<&SearchTarget<'_>>,
    prune: bool,
    i_parts: &[Vec<usize>],
    nu_blocks: &[RatTuple],
    dims: &[usize],
    i: usize,
    remaining: &mut Vec<usize>,
    j_parts: &mut Vec<Vec<usize>>,
    lambda_bars: &mut Vec<Rat>,
    on_found: &mut dyn FnMut(Witness) -> bool,
) -> bool {
    let r = i_parts.len();
    if i == r {
        debug_assert!(remaining.is_empty());
        let wit = Witness::new(i_parts.to_vec(), j_parts.clone(), lambda_bars.clone());
        // deferred checks for the unpruned oracle
        if validate_witness(&wit, n, h).is_err() {
            return true;
        }
        if let Some(t) = target {
            if wit.lambda_bars != t.values {
                return true;
            }
        }
        return on_found(wit);
    }
    let mut chosen = Vec::with_capacity(dims[i]);
    rec_subsets(
        n,
        h,
        target,
        prune,
        i_parts,
        nu_blocks,
        dims,
        i,
        0,
        &mut chosen,
        remaining,
        j_parts,
        lambda_bars,
        on_found,
    )
}

#[allow(clippy::too_many_arguments)]
fn rec_subsets(
    n: &NewtonData,
    h: &HodgeData,
    target: Option<&SearchTarget<'_>>,
    prune: bool,
    i_parts: &[Vec<usize>],
    nu_blocks: &[RatTuple],
    dims: &[usize],
    i: usize,
    start: usize,
    chosen: &mut Vec<usize>,
    remaining: &mut Vec<usize>,
    j_parts: &mut Vec<Vec<usize>>,
    lambda_bars: &mut Vec<Rat>,
    on_found: &mut dyn FnMut(Witness) -> bool,
) -> bool {
    if chosen.len() == dims[i] {
        let mu_i = mu_block(chosen, h);
        let lb = &(&mu_i.total() - &nu_blocks[i].total()) / &Rat::from_int(dims[i] as i64);
        if prune {
            if !dominance_geq(&mu_i, &nu_blocks[i]).unwrap() {
                return true;
            }
            match target {
                Some(t) => {
                    if lb != t.values[i] {
                        return true;
                    }
                }
                None => {
                    if i > 0 && lambda_bars[i - 1] <= lb {
                        return true;
                    }
                }
            }
        }
        let taken: Vec<usize> = chosen.clone();
        let kept: Vec<usize> = remaining
            .iter()
            .filter(|k| !taken.contains(k))
            .cloned()
            .collect();
        let saved = std::mem::replace(remaining, kept);
        j_parts.push(taken);
        lambda_bars.push(lb);
        let cont = rec_entry_groups(
            n,
            h,
            target,
            prune,
            i_parts,
            nu_blocks,
            dims,
            i + 1,
            remaining,
            j_parts,
            lambda_bars,
            on_found,
        );
        lambda_bars.pop();
        j_parts.pop();
        *remaining = saved;
        return cont;
    }
    let need = dims[i] - chosen.len();
    for pos in start..remaining.len() {
        if remaining.len() - pos < need {
            break;
        }
        chosen.push(remaining[pos]);
        let cont = rec_subsets(
            n,
            h,
            target,
            prune,
            i_parts,
            nu_blocks,
            dims,
            i,
            pos + 1,
            chosen,
            remaining,
            j_parts,
            lambda_bars,
            on_found,
        );
        chosen.pop();
        if !cont {
            return false;
        }
    }
    true
}

/// Decides whether `lambda` is realizable; on success returns the canonical
/// witness (the one matching the reconstructed stratum) of the first hit in
/// search order.
pub fn check_hn_vector(
    lambda: &HNVector,
    n: &NewtonData,
    h: &HodgeData,
) -> Result<Option<Witness>> {
    if lambda.len() != n.d() {
        return Err(Error::LengthMismatch {
            expected: n.d(),
            got: lambda.len(),
        });
    }
    let target = SearchTarget {
        values: lambda.values(),
        sizes: lambda.mults(),
    };
    let mut found: Option<Witness> = None;
    search_witnesses(n, h, Some(&target), true, &mut |wit| {
        found = Some(wit);
        false
    });
    match found {
        None => Ok(None),
        Some(wit) => {
            debug_assert!(validate_witness(&wit, n, h).is_ok());
            let s = witness_to_stratum(&wit, n, h)?;
            Ok(Some(stratum_to_witness(&s)?))
        }
    }
}

/// All realizable HN-vectors via the witness route.
pub fn enumerate_witness_lambdas(n: &NewtonData, h: &HodgeData) -> Result<BTreeSet<HNVector>> {
    enumerate_lambdas_impl(n, h, true)
}

/// Unpruned variant, kept as an oracle for the pruning.
pub fn enumerate_witness_lambdas_unpruned(
    n: &NewtonData,
    h: &HodgeData,
) -> Result<BTreeSet<HNVector>> {
    enumerate_lambdas_impl(n, h, false)
}

fn enumerate_lambdas_impl(
    n: &NewtonData,
    h: &HodgeData,
    prune: bool,
) -> Result<BTreeSet<HNVector>> {
    if h.d() != n.d() {
        return Err(Error::LengthMismatch {
            expected: n.d(),
            got: h.d(),
        });
    }
    let mut out = BTreeSet::new();
    search_witnesses(n, h, None, prune, &mut |wit| {
        if let Ok(v) = wit.hn_vector() {
            out.insert(v);
        }
        true
    });
    Ok(out)
}

/// Rebuilds the unique stratum whose group-to-class contingency matrices
/// match the witness.
pub fn witness_to_stratum(wit: &Witness, n: &NewtonData, h: &HodgeData) -> Result<Stratum> {
    validate_witness(wit, n, h)?;
    let r = wit.r();
    let t = n.distinct_values().len();
    let mut x_table = vec![vec![0usize; t]; r];
    for (i, part) in wit.i_parts.iter().enumerate() {
        for &k in part {
            x_table[i][n.class_of_summand(k)] += 1;
        }
    }
    let p = Composition::new(wit.i_parts.iter().map(|p| p.len()).collect())?;
    let x = perm_from_table(&x_table, &p, &stab_nu(n))?;

    let s_count = h.distinct_values().len();
    let mut w_table = vec![vec![0usize; s_count]; r];
    for (i, part) in wit.j_parts.iter().enumerate() {
        for &k in part {
            w_table[i][h.class_of_entry(k)] += 1;
        }
    }
    let d_blocks: Vec<usize> = wit.j_parts.iter().map(|p| p.len()).collect();
    let d_comp = Composition::new(d_blocks)?;
    let w = perm_from_table(&w_table, &d_comp, &stab_mu(h))?;

    let s = build_stratum(&p, &x, &w, n, h)?;
    if !in_gamma(&s) {
        return Err(Error::InvalidWitness(
            "reconstructed stratum fails the membership conditions".into(),
        ));
    }
    let expected = HNVector::from_blocks(&wit.lambda_bars, s.d_blocks())?;
    if hn_vector(&s)? != expected {
        return Err(Error::InvalidWitness(
            "reconstructed stratum has a different HN-vector".into(),
        ));
    }
    Ok(s)
}

/// The canonical witness of a stratum: preimages of the group intervals
/// under the two permutations.
pub fn stratum_to_witness(s: &Stratum) -> Result<Witness> {
    if !in_gamma(s) {
        return Err(Error::NotInGamma);
    }
    let xinv = s.x().inverse();
    let winv = s.w().inverse();
    let mut i_parts = Vec::with_capacity(s.r());
    for (a, b) in s.p().intervals() {
        let mut part: Vec<usize> = (a..=b).map(|k| xinv.apply(k)).collect();
        part.sort_unstable();
        i_parts.push(part);
    }
    let mut j_parts = Vec::with_capacity(s.r());
    let t_cum = s.t_cum();
    for i in 0..s.r() {
        let mut part: Vec<usize> = (t_cum[i] + 1..=t_cum[i + 1])
            .map(|k| winv.apply(k))
            .collect();
        part.sort_unstable();
        j_parts.push(part);
    }
    Ok(Witness::new(i_parts, j_parts, s.avg_slopes().to_vec()))
}

/// Outcome of comparing the two routes to the set of HN-vectors.
#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    pub gamma_count: usize,
    pub lambda_from_gamma: BTreeSet<HNVector>,
    pub lambda_from_witness: BTreeSet<HNVector>,
    pub only_gamma: Vec<HNVector>,
    pub only_witness: Vec<HNVector>,
    pub roundtrip_failures: Vec<String>,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.only_gamma.is_empty()
            && self.only_witness.is_empty()
            && self.roundtrip_failures.is_empty()
    }
}

impl fmt::Display for EquivalenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "strata: {}, HN-vectors: {} (stratum route) vs {} (witness route)",
            self.gamma_count,
            self.lambda_from_gamma.len(),
            self.lambda_from_witness.len()
        )?;
        if self.passed() {
            write!(f, "routes agree")
        } else {
            for v in &self.only_gamma {
                writeln!(f, "only via strata: {}", v)?;
            }
            for v in &self.only_witness {
                writeln!(f, "only via witnesses: {}", v)?;
            }
            for msg in &self.roundtrip_failures {
                writeln!(f, "round-trip failure: {}", msg)?;
            }
            write!(f, "routes DISAGREE")
        }
    }
}

/// Computes the set of HN-vectors along both routes, reports the symmetric
/// difference, and round-trips every stratum through its witness.
pub fn verify_equivalence(n: &NewtonData, h: &HodgeData) -> Result<EquivalenceReport> {
    let gamma = crate::strata::enumerate_gamma(n, h)?;
    let mut lambda_from_gamma = BTreeSet::new();
    let mut roundtrip_failures = Vec::new();
    for s in &gamma {
        lambda_from_gamma.insert(hn_vector(s)?);
        let wit = stratum_to_witness(s)?;
        if let Err(e) = validate_witness(&wit, n, h) {
            roundtrip_failures.push(format!("{}: invalid witness: {}", s, e));
            continue;
        }
        match witness_to_stratum(&wit, n, h) {
            Ok(back) if &back == s => {}
            Ok(back) => roundtrip_failures.push(format!("{} came back as {}", s, back)),
            Err(e) => roundtrip_failures.push(format!("{}: {}", s, e)),
        }
    }
    let lambda_from_witness = enumerate_witness_lambdas(n, h)?;
    let only_gamma: Vec<HNVector> = lambda_from_gamma
        .difference(&lambda_from_witness)
        .cloned()
        .collect();
    let only_witness: Vec<HNVector> = lambda_from_witness
        .difference(&lambda_from_gamma)
        .cloned()
        .collect();
    Ok(EquivalenceReport {
        gamma_count: gamma.len(),
        lambda_from_gamma,
        lambda_from_witness,
        only_gamma,
        only_witness,
        roundtrip_failures,
    })
}
