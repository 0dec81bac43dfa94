//! Strata of the stratification: triples (composition, coset rep in the
//! summand group, coset rep in the big group) with their derived block
//! data, the membership conditions, and the enumeration of the full index
//! set with its map onto HN-vectors.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::isocrystal::{stab_mu, stab_nu, HodgeData, NewtonData};
use crate::perm::{
    block_embed, compositions, contingency_tables, enumerate_tables_pruned, is_kostant,
    kostant_reps, perm_from_table, Composition, Perm,
};
use crate::rational::{dominance_geq, Rat, RatTuple};

/// A stratum index: the composition `P` of the number of simple summands,
/// a Kostant representative `x` in `S_l`, a Kostant representative `w` in
/// `S_d`, and all block data derived from them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stratum {
    p: Composition,
    x: Perm,
    w: Perm,
    d_blocks: Vec<usize>,
    /// Cumulative block boundaries `t_0 = 0, ..., t_r = d`.
    t_cum: Vec<usize>,
    nu_blocks: Vec<RatTuple>,
    mu_blocks: Vec<RatTuple>,
    lambda_blocks: Vec<RatTuple>,
    avg_slopes: Vec<Rat>,
}

impl Stratum {
    pub fn p(&self) -> &Composition {
        &self.p
    }

    pub fn x(&self) -> &Perm {
        &self.x
    }

    pub fn w(&self) -> &Perm {
        &self.w
    }

    pub fn r(&self) -> usize {
        self.p.len()
    }

    pub fn d(&self) -> usize {
        *self.t_cum.last().unwrap()
    }

    pub fn d_blocks(&self) -> &[usize] {
        &self.d_blocks
    }

    pub fn t_cum(&self) -> &[usize] {
        &self.t_cum
    }

    pub fn nu_blocks(&self) -> &[RatTuple] {
        &self.nu_blocks
    }

    pub fn mu_blocks(&self) -> &[RatTuple] {
        &self.mu_blocks
    }

    pub fn lambda_blocks(&self) -> &[RatTuple] {
        &self.lambda_blocks
    }

    /// Per-block average slopes `|lambda_j| / d_j`.
    pub fn avg_slopes(&self) -> &[Rat] {
        &self.avg_slopes
    }

    /// Canonical sort key: ascending number of blocks, then composition,
    /// then the two one-line forms.
    fn sort_key(&self) -> (usize, Vec<usize>, Vec<usize>, Vec<usize>) {
        (
            self.r(),
            self.p.parts().to_vec(),
            self.x.one_line().to_vec(),
            self.w.one_line().to_vec(),
        )
    }

    pub fn to_record(&self) -> StratumRecord {
        StratumRecord {
            p: self.p.parts().to_vec(),
            x: self.x.one_line().to_vec(),
            w: self.w.one_line().to_vec(),
            d: self.d_blocks.clone(),
            nu_blocks: self.nu_blocks.iter().map(block_to_vec).collect(),
            mu_blocks: self.mu_blocks.iter().map(block_to_vec).collect(),
            lambda: self.lambda_blocks.iter().map(block_to_vec).collect(),
            hn_vector: match hn_vector(self) {
                Ok(v) => block_to_vec(v.entries()),
                Err(_) => Vec::new(),
            },
            rank: stratum_rank(self),
        }
    }
}

fn block_to_vec(t: &RatTuple) -> Vec<Rat> {
    t.entries().to_vec()
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(P={}, x={}, w={})", self.p, self.x, self.w)
    }
}

/// JSON record for one stratum, as written by the CLI.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StratumRecord {
    #[serde(rename = "P")]
    pub p: Vec<usize>,
    pub x: Vec<usize>,
    pub w: Vec<usize>,
    pub d: Vec<usize>,
    pub nu_blocks: Vec<Vec<Rat>>,
    pub mu_blocks: Vec<Vec<Rat>>,
    pub lambda: Vec<Vec<Rat>>,
    pub hn_vector: Vec<Rat>,
    pub rank: usize,
}

/// A non-increasing tuple that is constant on blocks with strictly
/// decreasing block values.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HNVector {
    entries: RatTuple,
    values: Vec<Rat>,
    mults: Vec<usize>,
}

impl HNVector {
    /// Validates an arbitrary tuple: must be non-empty and non-increasing;
    /// the block structure is read off by grouping equal entries.
    pub fn from_tuple(t: &RatTuple) -> Result<HNVector> {
        if t.is_empty() {
            return Err(Error::EmptyTuple);
        }
        if !t.is_non_increasing() {
            return Err(Error::NotSorted(format!(
                "{} is not non-increasing, so its block values are not strictly decreasing",
                t
            )));
        }
        let mut values: Vec<Rat> = Vec::new();
        let mut mults = Vec::new();
        for e in t.iter() {
            if values.last() == Some(e) {
                *mults.last_mut().unwrap() += 1;
            } else {
                values.push(e.clone());
                mults.push(1);
            }
        }
        Ok(HNVector {
            entries: t.clone(),
            values,
            mults,
        })
    }

    pub fn from_blocks(values: &[Rat], mults: &[usize]) -> Result<HNVector> {
        let mut entries = Vec::new();
        for (v, &m) in values.iter().zip(mults) {
            for _ in 0..m {
                entries.push(v.clone());
            }
        }
        HNVector::from_tuple(&RatTuple::new(entries))
    }

    pub fn entries(&self) -> &RatTuple {
        &self.entries
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    pub fn mults(&self) -> &[usize] {
        &self.mults
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl fmt::Display for HNVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.entries)
    }
}

/// Builds a stratum from its defining triple, checking the Kostant
/// preconditions and computing all derived block data.
pub fn build_stratum(
    p: &Composition,
    x: &Perm,
    w: &Perm,
    n: &NewtonData,
    h: &HodgeData,
) -> Result<Stratum> {
    let l = n.l();
    let d = n.d();
    if p.total() != l {
        return Err(Error::InvalidComposition(format!(
            "composition {} does not sum to the number of summands {}",
            p, l
        )));
    }
    if h.d() != d {
        return Err(Error::LengthMismatch {
            expected: d,
            got: h.d(),
        });
    }
    let snu = stab_nu(n);
    if !is_kostant(x, p, &snu) {
        return Err(Error::NotKostant(format!(
            "x={} is not the Kostant representative for ({}, {})",
            x, p, snu
        )));
    }
    let xinv = x.inverse();
    let sizes = n.block_sizes();
    let mut d_blocks = Vec::with_capacity(p.len());
    for (a, b) in p.intervals() {
        d_blocks.push((a..=b).map(|k| sizes[xinv.apply(k) - 1]).sum());
    }
    let d_comp = Composition::new(d_blocks.clone())?;
    let smu = stab_mu(h);
    if !is_kostant(w, &d_comp, &smu) {
        return Err(Error::NotKostant(format!(
            "w={} is not the Kostant representative for ({}, {})",
            w, d_comp, smu
        )));
    }
    let mut t_cum = vec![0usize];
    for &dj in &d_blocks {
        t_cum.push(t_cum.last().unwrap() + dj);
    }
    let nu_perm = block_embed(x, &n.block_sizes_composition())?.act(n.nu_tuple())?;
    let mu_perm = w.act(h.mu_tuple())?;
    let mut nu_blocks = Vec::with_capacity(d_blocks.len());
    let mut mu_blocks = Vec::with_capacity(d_blocks.len());
    let mut lambda_blocks = Vec::with_capacity(d_blocks.len());
    let mut avg_slopes = Vec::with_capacity(d_blocks.len());
    for j in 0..d_blocks.len() {
        let range = t_cum[j]..t_cum[j + 1];
        let nu_j = nu_perm.slice(range.clone());
        let mu_j = mu_perm.slice(range);
        debug_assert!(nu_j.is_non_increasing());
        debug_assert!(mu_j.is_non_increasing());
        let lambda_j = mu_j.sub(&nu_j)?;
        avg_slopes.push(&lambda_j.total() / &Rat::from_int(d_blocks[j] as i64));
        nu_blocks.push(nu_j);
        mu_blocks.push(mu_j);
        lambda_blocks.push(lambda_j);
    }
    // telescoping: block totals of lambda sum to |mu| - |nu|
    debug_assert_eq!(
        lambda_blocks.iter().map(|b| b.total()).sum::<Rat>(),
        &mu_perm.total() - &nu_perm.total()
    );
    Ok(Stratum {
        p: p.clone(),
        x: x.clone(),
        w: w.clone(),
        d_blocks,
        t_cum,
        nu_blocks,
        mu_blocks,
        lambda_blocks,
        avg_slopes,
    })
}

/// Membership in the index set: every lambda block is non-negative in the
/// normalized partial-sum order, and the per-block average slopes strictly
/// decrease.
pub fn in_gamma(s: &Stratum) -> bool {
    for j in 0..s.r() {
        let dom = dominance_geq(&s.mu_blocks[j], &s.nu_blocks[j]).unwrap();
        // the literal form on the unsorted difference agrees
        debug_assert_eq!(
            dom,
            dominance_geq(&s.lambda_blocks[j], &RatTuple::zeros(s.d_blocks[j])).unwrap()
        );
        if !dom {
            return false;
        }
    }
    s.avg_slopes.windows(2).all(|p| p[0] > p[1])
}

/// The HN-vector: each block's average slope repeated by its dimension.
pub fn hn_vector(s: &Stratum) -> Result<HNVector> {
    if !in_gamma(s) {
        return Err(Error::NotInGamma);
    }
    HNVector::from_blocks(&s.avg_slopes, &s.d_blocks)
}

/// The rank attached to a stratum: the inversion count of `w`.
pub fn stratum_rank(s: &Stratum) -> usize {
    s.w.length()
}

/// Enumerates the full index set in canonical order. The search iterates
/// compositions of the summand count, then coset representatives for the
/// summand permutation, then representatives for the big permutation; the
/// latter are generated through their contingency tables so that rows
/// failing the block conditions cut the search early.
pub fn enumerate_gamma(n: &NewtonData, h: &HodgeData) -> Result<Vec<Stratum>> {
    if h.d() != n.d() {
        return Err(Error::LengthMismatch {
            expected: n.d(),
            got: h.d(),
        });
    }
    let l = n.l();
    let snu = stab_nu(n);
    let smu = stab_mu(h);
    let sizes = n.block_sizes();
    let mu_values = h.distinct_values();
    let mut out: Vec<Stratum> = Vec::new();
    for p in compositions(l) {
        for x_table in contingency_tables(p.parts(), snu.parts()) {
            let x = perm_from_table(&x_table, &p, &snu)?;
            let xinv = x.inverse();
            let mut d_blocks = Vec::with_capacity(p.len());
            let mut nu_blocks: Vec<RatTuple> = Vec::with_capacity(p.len());
            for (a, b) in p.intervals() {
                let mut entries = Vec::new();
                for k in a..=b {
                    let summand = xinv.apply(k);
                    for _ in 0..sizes[summand - 1] {
                        entries.push(n.simple_slopes()[summand - 1].clone());
                    }
                }
                d_blocks.push(entries.len());
                nu_blocks.push(RatTuple::new(entries));
            }
            let nu_totals: Vec<Rat> = nu_blocks.iter().map(|b| b.total()).collect();

            // row i of a w-table lists how many entries of each Hodge value
            // class land in block i; the block tuple and its average slope
            // are fixed as soon as the row is complete.
            let block_of_row = |row: &[usize]| -> RatTuple {
                let mut entries = Vec::new();
                for (c, &count) in row.iter().enumerate() {
                    for _ in 0..count {
                        entries.push(mu_values[c].clone());
                    }
                }
                RatTuple::new(entries)
            };
            let avg_of_row = |row: &[usize], i: usize| -> Rat {
                let total: Rat = row
                    .iter()
                    .enumerate()
                    .map(|(c, &count)| &mu_values[c] * &Rat::from_int(count as i64))
                    .sum();
                &(&total - &nu_totals[i]) / &Rat::from_int(d_blocks[i] as i64)
            };

            let mut found: Vec<Vec<Vec<usize>>> = Vec::new();
            enumerate_tables_pruned(
                &d_blocks,
                smu.parts(),
                &mut |table, i| {
                    let mu_i = block_of_row(&table[i]);
                    if !dominance_geq(&mu_i, &nu_blocks[i]).unwrap() {
                        return false;
                    }
                    if i > 0 {
                        let prev = avg_of_row(&table[i - 1], i - 1);
                        let cur = avg_of_row(&table[i], i);
                        if prev <= cur {
                            return false;
                        }
                    }
                    true
                },
                &mut |table| {
                    found.push(table.to_vec());
                    true
                },
            );
            for w_table in found {
                let d_comp = Composition::new(d_blocks.clone())?;
                let w = perm_from_table(&w_table, &d_comp, &smu)?;
                let s = build_stratum(&p, &x, &w, n, h)?;
                debug_assert!(in_gamma(&s));
                out.push(s);
            }
        }
    }
    out.sort_by_key(|s| s.sort_key());
    debug_assert!(out.windows(2).all(|p| p[0] != p[1]));
    Ok(out)
}

/// Reference enumeration without any pruning: filter every candidate triple
/// through the membership test. Kept as an oracle for the pruned search.
pub fn enumerate_gamma_unpruned(n: &NewtonData, h: &HodgeData) -> Result<Vec<Stratum>> {
    let l = n.l();
    let snu = stab_nu(n);
    let smu = stab_mu(h);
    let sizes = n.block_sizes();
    let mut out = Vec::new();
    for p in compositions(l) {
        for x in kostant_reps(&p, &snu)? {
            let xinv = x.inverse();
            let mut d_blocks = Vec::with_capacity(p.len());
            for (a, b) in p.intervals() {
                d_blocks.push((a..=b).map(|k| sizes[xinv.apply(k) - 1]).sum::<usize>());
            }
            let d_comp = Composition::new(d_blocks)?;
            for w in kostant_reps(&d_comp, &smu)? {
                let s = build_stratum(&p, &x, &w, n, h)?;
                if in_gamma(&s) {
                    out.push(s);
                }
            }
        }
    }
    out.sort_by_key(|s| s.sort_key());
    Ok(out)
}

/// Groups the enumerated strata by their HN-vector; the key set is the
/// image of the (generally non-injective) map onto HN-vectors.
pub fn lambda_fibers(n: &NewtonData, h: &HodgeData) -> Result<BTreeMap<HNVector, Vec<Stratum>>> {
    let mut fibers: BTreeMap<HNVector, Vec<Stratum>> = BTreeMap::new();
    for s in enumerate_gamma(n, h)? {
        let v = hn_vector(&s)?;
        fibers.entry(v).or_default().push(s);
    }
    Ok(fibers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isocrystal::{hodge_from_tuple, newton_from_slopes, newton_from_tuple};

    fn rat(p: i64, q: i64) -> Rat {
        Rat::new(p, q)
    }

    fn d3_instance(mu: &[i64]) -> (NewtonData, HodgeData) {
        let n = newton_from_slopes(&[rat(1, 2), rat(0, 1)]).unwrap();
        let h = hodge_from_tuple(&RatTuple::from_ints(mu)).unwrap();
        (n, h)
    }

    #[test]
    fn build_stratum_r1() {
        let (n, h) = d3_instance(&[4, 1, 0]);
        let p = Composition::new(vec![2]).unwrap();
        let s = build_stratum(&p, &Perm::identity(2), &Perm::identity(3), &n, &h).unwrap();
        assert_eq!(s.d_blocks(), &[3]);
        assert_eq!(
            s.nu_blocks()[0],
            RatTuple::new(vec![rat(1, 2), rat(1, 2), rat(0, 1)])
        );
        assert_eq!(s.mu_blocks()[0], RatTuple::from_ints(&[4, 1, 0]));
        assert_eq!(
            s.lambda_blocks()[0],
            RatTuple::new(vec![rat(7, 2), rat(1, 2), rat(0, 1)])
        );
    }

    #[test]
    fn build_stratum_block_swap() {
        let (n, h) = d3_instance(&[4, 1, 0]);
        let p = Composition::new(vec![1, 1]).unwrap();
        let x = Perm::from_images(vec![2, 1]).unwrap();
        let s = build_stratum(&p, &x, &Perm::identity(3), &n, &h).unwrap();
        assert_eq!(s.d_blocks(), &[1, 2]);
        assert_eq!(s.nu_blocks()[0], RatTuple::from_ints(&[0]));
        assert_eq!(s.nu_blocks()[1], RatTuple::new(vec![rat(1, 2), rat(1, 2)]));
        assert_eq!(s.mu_blocks()[0], RatTuple::from_ints(&[4]));
        assert_eq!(s.mu_blocks()[1], RatTuple::from_ints(&[1, 0]));
    }

    #[test]
    fn build_stratum_gamma4() {
        let (n, h) = d3_instance(&[4, 1, 0]);
        let p = Composition::new(vec![1, 1]).unwrap();
        let w = Perm::from_cycles(3, &[vec![2, 3]]).unwrap();
        let s = build_stratum(&p, &Perm::identity(2), &w, &n, &h).unwrap();
        assert_eq!(s.mu_blocks()[0], RatTuple::from_ints(&[4, 0]));
        assert_eq!(s.mu_blocks()[1], RatTuple::from_ints(&[1]));
        assert_eq!(s.nu_blocks()[0], RatTuple::new(vec![rat(1, 2), rat(1, 2)]));
        assert_eq!(s.nu_blocks()[1], RatTuple::from_ints(&[0]));
        assert!(in_gamma(&s));
        assert_eq!(s.avg_slopes(), &[rat(3, 2), rat(1, 1)]);
        assert_eq!(stratum_rank(&s), 1);
        let v = hn_vector(&s).unwrap();
        assert_eq!(
            v.entries(),
            &RatTuple::new(vec![rat(3, 2), rat(3, 2), rat(1, 1)])
        );
    }

    #[test]
    fn gamma4_threshold() {
        // mu = (3,1,0): 3 + 0 > 2*1 + 1 fails, so the stratum drops out
        let (n, h) = d3_instance(&[3, 1, 0]);
        let p = Composition::new(vec![1, 1]).unwrap();
        let w = Perm::from_cycles(3, &[vec![2, 3]]).unwrap();
        let s = build_stratum(&p, &Perm::identity(2), &w, &n, &h).unwrap();
        assert!(!in_gamma(&s));
        assert!(hn_vector(&s).is_err());
    }

    #[test]
    fn kostant_precondition_checked() {
        let (n, h) = d3_instance(&[4, 1, 0]);
        let p = Composition::new(vec![2]).unwrap();
        let x = Perm::from_images(vec![2, 1]).unwrap(); // not Kostant for ((2), stab)
        assert!(matches!(
            build_stratum(&p, &x, &Perm::identity(3), &n, &h),
            Err(Error::NotKostant(_))
        ));
    }

    #[test]
    fn enumerate_d3_worked_instance() {
        let (n, h) = d3_instance(&[4, 1, 0]);
        let gamma = enumerate_gamma(&n, &h).unwrap();
        assert_eq!(gamma.len(), 4);

        let (n, h) = d3_instance(&[3, 1, 0]);
        let gamma = enumerate_gamma(&n, &h).unwrap();
        assert_eq!(gamma.len(), 3);
    }

    #[test]
    fn enumerate_d1() {
        let n = newton_from_tuple(&RatTuple::from_ints(&[0])).unwrap();
        let h = hodge_from_tuple(&RatTuple::new(vec![rat(5, 3)])).unwrap();
        let gamma = enumerate_gamma(&n, &h).unwrap();
        assert_eq!(gamma.len(), 1);
        let v = hn_vector(&gamma[0]).unwrap();
        assert_eq!(v.entries(), &RatTuple::new(vec![rat(5, 3)]));
    }

    #[test]
    fn enumerate_matches_unpruned() {
        let cases: Vec<(Vec<Rat>, Vec<i64>)> = vec![
            (vec![rat(1, 2), rat(0, 1)], vec![4, 1, 0]),
            (vec![rat(0, 1), rat(0, 1)], vec![1, 0]),
            (vec![rat(0, 1); 4], vec![3, 1, 0, -2]),
            (vec![rat(1, 2), rat(1, 2), rat(0, 1)], vec![2, 2, 1, 0, 0]),
        ];
        for (slopes, mu) in cases {
            let n = newton_from_slopes(&slopes).unwrap();
            let h = hodge_from_tuple(&RatTuple::from_ints(&mu)).unwrap();
            assert_eq!(n.d(), h.d());
            let pruned = enumerate_gamma(&n, &h).unwrap();
            let unpruned = enumerate_gamma_unpruned(&n, &h).unwrap();
            assert_eq!(pruned, unpruned);
        }
    }

    #[test]
    fn d5_noninjective_fiber() {
        let n = newton_from_slopes(&vec![rat(0, 1); 5]).unwrap();
        let h = hodge_from_tuple(&RatTuple::from_ints(&[5, 4, 3, 2, -14])).unwrap();
        let fibers = lambda_fibers(&n, &h).unwrap();
        let key = HNVector::from_blocks(&[rat(7, 2), rat(-7, 3)], &[2, 3]).unwrap();
        let fiber = fibers.get(&key).expect("expected fiber missing");
        assert!(fiber.len() >= 2);
        let w1 = Perm::from_cycles(5, &[vec![2, 3, 4]]).unwrap();
        let w2 = Perm::from_cycles(5, &[vec![1, 3, 2]]).unwrap();
        assert!(fiber.iter().any(|s| s.w() == &w1 && s.p().parts() == [2, 3]));
        assert!(fiber.iter().any(|s| s.w() == &w2 && s.p().parts() == [2, 3]));
        // ranks: inversion counts of the Weyl components
        let s1 = fiber.iter().find(|s| s.w() == &w1).unwrap();
        assert_eq!(stratum_rank(s1), 2);
    }

    #[test]
    fn d2_trivial_isocrystal() {
        let n = newton_from_tuple(&RatTuple::from_ints(&[0, 0])).unwrap();
        let h = hodge_from_tuple(&RatTuple::from_ints(&[1, 0])).unwrap();
        let fibers = lambda_fibers(&n, &h).unwrap();
        assert_eq!(fibers.len(), 2);
        let keys: Vec<&HNVector> = fibers.keys().collect();
        let semi = HNVector::from_blocks(&[rat(1, 2)], &[2]).unwrap();
        let split = HNVector::from_blocks(&[rat(1, 1), rat(0, 1)], &[1, 1]).unwrap();
        assert!(keys.contains(&&semi));
        assert!(keys.contains(&&split));
        for fiber in fibers.values() {
            assert_eq!(fiber.len(), 1);
        }
    }

    #[test]
    fn d5_hn_vector_example() {
        let n = newton_from_slopes(&vec![rat(0, 1); 5]).unwrap();
        let h = hodge_from_tuple(&RatTuple::from_ints(&[5, 4, 3, 2, -14])).unwrap();
        let p = Composition::new(vec![2, 3]).unwrap();
        let w = Perm::from_cycles(5, &[vec![2, 3, 4]]).unwrap();
        let s = build_stratum(&p, &Perm::identity(5), &w, &n, &h).unwrap();
        let v = hn_vector(&s).unwrap();
        let expected = HNVector::from_blocks(&[rat(7, 2), rat(-7, 3)], &[2, 3]).unwrap();
        assert_eq!(v, expected);
    }

    #[test]
    fn hn_vector_rejects_unsorted() {
        assert!(HNVector::from_tuple(&RatTuple::from_ints(&[1, 2])).is_err());
        assert!(HNVector::from_tuple(&RatTuple::new(vec![])).is_err());
    }

    #[test]
    fn record_serialization() {
        let (n, h) = d3_instance(&[4, 1, 0]);
        let gamma = enumerate_gamma(&n, &h).unwrap();
        let rec = gamma[0].to_record();
        let json = serde_json::to_string(&rec).unwrap();
        assert!(json.contains("\"P\":[2]"));
        assert!(json.contains("\"hn_vector\":[\"4/3\",\"4/3\",\"4/3\"]"));
    }
}
