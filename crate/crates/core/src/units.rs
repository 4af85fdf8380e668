//! Presentations of the finite unit groups `(O_K / uniformizer^M)^x`.
//!
//! Generators are a lift `g0` of a residue-field generator together with
//! `1 + uniformizer^k * beta_j` for `1 <= k < M` and `beta_j` running over lifts
//! of an `F_p`-basis of the residue field. Every unit has a unique "digit"
//! expansion in these generators, which is what [`UnitGroup::dlog`] returns.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::Zero;

use crate::angle::Angle;
use crate::error::{AsaiError, Result};
use crate::field::{EElement, LocalField};
use crate::padic::prime_factors;
use crate::snf::{smith, Snf};

#[derive(Debug)]
pub struct UnitGroup {
    field: LocalField,
    level: u32,
    gens: Vec<EElement>,
    gen_level: Vec<u32>,
    inv_pows: Vec<Vec<EElement>>,
    residue_log: HashMap<Vec<u64>, u64>,
    relations: Vec<Vec<i128>>,
    snf: Snf,
}

fn residue_mul(field: &LocalField, x: &[u64], y: &[u64]) -> Vec<u64> {
    let p = field.p();
    match x.len() {
        1 => vec![x[0] * y[0] % p],
        _ => {
            let d = field.quad().expect("two residue coordinates").d().residue(1).unwrap_or(0);
            vec![(x[0] * y[0] + d * (x[1] * y[1] % p)) % p, (x[0] * y[1] + x[1] * y[0]) % p]
        }
    }
}

fn residue_generator(field: &LocalField) -> Vec<u64> {
    let f = field.f() as usize;
    let q = field.q();
    let p = field.p();
    let factors = prime_factors(q - 1);
    let one: Vec<u64> = if f == 1 { vec![1] } else { vec![1, 0] };
    let pow = |x: &[u64], mut e: u64| {
        let mut r = one.clone();
        let mut b = x.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                r = residue_mul(field, &r, &b);
            }
            b = residue_mul(field, &b, &b);
            e >>= 1;
        }
        r
    };
    let candidates: Vec<Vec<u64>> = if f == 1 {
        (1..p).map(|a| vec![a]).collect()
    } else {
        (0..p).flat_map(|b| (0..p).map(move |a| vec![a, b])).filter(|v| v[0] != 0 || v[1] != 0).collect()
    };
    candidates
        .into_iter()
        .find(|g| factors.iter().all(|&l| pow(g, (q - 1) / l) != one))
        .expect("finite field has a primitive element")
}

static CACHE: OnceLock<Mutex<HashMap<(LocalField, u32), Arc<UnitGroup>>>> = OnceLock::new();

impl UnitGroup {
    /// The group `(O_K / uniformizer^level)^x`, shared through a process-wide cache.
    pub fn get(field: &LocalField, level: u32) -> Result<Arc<UnitGroup>> {
        let level = level.max(1);
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(g) = cache.lock().expect("unit group cache").get(&(*field, level)) {
            return Ok(g.clone());
        }
        let g = Arc::new(UnitGroup::build(field, level)?);
        cache.lock().expect("unit group cache").insert((*field, level), g.clone());
        Ok(g)
    }

    fn build(field: &LocalField, level: u32) -> Result<UnitGroup> {
        if level + 1 > field.max_level() {
            return Err(AsaiError::Precision { needed: level as i64 + 1, available: field.precision() });
        }
        let base = field.base();
        let rg = residue_generator(field);
        let g0 = match rg.len() {
            1 => field.from_i64(rg[0] as i64),
            _ => EElement::new(base.from_i64(rg[0] as i64), base.from_i64(rg[1] as i64)),
        };
        let mut residue_log = HashMap::new();
        let mut cur: Vec<u64> = if rg.len() == 1 { vec![1] } else { vec![1, 0] };
        for e in 0..field.q() - 1 {
            residue_log.insert(cur.clone(), e);
            cur = residue_mul(field, &cur, &rg);
        }
        let mut gens = vec![g0];
        let mut gen_level = vec![0];
        for k in 1..level {
            let pk = field.pi_pow(k as i64);
            for beta in field.residue_basis() {
                gens.push(field.one() + field.mul(&pk, &beta));
                gen_level.push(k);
            }
        }
        let p = field.p();
        let inv_pows = gens
            .iter()
            .zip(&gen_level)
            .map(|(g, &k)| {
                let n = if k == 0 { field.q() - 1 } else { p };
                let gi = field.inv(g);
                let mut out = Vec::with_capacity(n as usize);
                let mut c = field.one();
                for _ in 0..n {
                    out.push(c);
                    c = field.mul(&c, &gi);
                }
                out
            })
            .collect();
        let mut grp = UnitGroup {
            field: *field,
            level,
            gens,
            gen_level,
            inv_pows,
            residue_log,
            relations: Vec::new(),
            snf: Snf { d: vec![], u: vec![], v: vec![] },
        };
        let n = grp.gens.len();
        let mut relations = Vec::with_capacity(n);
        for i in 0..n {
            let ord = if grp.gen_level[i] == 0 { field.q() - 1 } else { p };
            let h = field.pow(&grp.gens[i], ord as i64);
            let digits = grp.dlog(&h)?;
            let mut row: Vec<i128> = digits.iter().map(|&x| -(x as i128)).collect();
            row[i] += ord as i128;
            relations.push(row);
        }
        grp.snf = smith(&relations, n);
        grp.relations = relations;
        Ok(grp)
    }

    pub fn field(&self) -> &LocalField {
        &self.field
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn generators(&self) -> &[EElement] {
        &self.gens
    }

    /// 0 for the residue generator, `k` for `1 + uniformizer^k * beta`.
    pub fn generator_levels(&self) -> &[u32] {
        &self.gen_level
    }

    pub fn relations(&self) -> &[Vec<i128>] {
        &self.relations
    }

    /// Invariant factors of the group.
    pub fn invariants(&self) -> &[i128] {
        &self.snf.d
    }

    pub fn order(&self) -> u64 {
        (self.field.q() - 1) * self.field.q().pow(self.level - 1)
    }

    pub fn exponent(&self) -> i64 {
        use num_integer::Integer;
        self.snf.d.iter().fold(1i64, |a, &d| if d == 0 { a } else { a.lcm(&(d as i64)) })
    }

    /// Digit expansion of a unit in the generators.
    pub fn dlog(&self, x: &EElement) -> Result<Vec<u64>> {
        let f = &self.field;
        let coords = f.residue_coords(x)?;
        let e0 = *self
            .residue_log
            .get(&coords)
            .ok_or_else(|| AsaiError::Invalid(format!("{x:?} is not a unit")))?;
        let mut out = vec![0u64; self.gens.len()];
        out[0] = e0;
        let mut y = f.mul(x, &self.inv_pows[0][e0 as usize]);
        let nb = f.residue_basis().len();
        let mut idx = 1;
        for k in 1..self.level {
            let z = f.mul(&(y - f.one()), &f.pi_pow(-(k as i64)));
            let c = f.residue_coords(&z)?;
            for (j, &cj) in c.iter().enumerate().take(nb) {
                out[idx + j] = cj;
                if cj != 0 {
                    y = f.mul(&y, &self.inv_pows[idx + j][cj as usize]);
                }
            }
            idx += nb;
        }
        Ok(out)
    }

    /// Checks that generator angles define a character, i.e. kill all relations.
    pub fn is_character(&self, angles: &[Angle]) -> bool {
        angles.len() == self.gens.len()
            && self.relations.iter().all(|row| {
                row.iter().zip(angles).map(|(&r, &a)| a * (r as i64)).sum::<Angle>().is_zero()
            })
    }

    /// Generator angles of the character indexed by `k` in `prod Z/d_i`.
    pub fn character_angles(&self, k: &[i128]) -> Vec<Angle> {
        let n = self.gens.len();
        let mut angles = vec![Angle::zero(); n];
        for (j, &kj) in k.iter().enumerate() {
            let dj = self.snf.d[j];
            if dj <= 1 || kj.rem_euclid(dj).is_zero() {
                continue;
            }
            let phi = Angle::new(kj.rem_euclid(dj) as i64, dj as i64);
            for (i, a) in angles.iter_mut().enumerate() {
                *a += phi * (self.snf.v[i][j].rem_euclid(dj) as i64);
            }
        }
        angles
    }

    /// All characters of the group as generator-angle vectors.
    pub fn all_characters(&self) -> Vec<Vec<Angle>> {
        let d: Vec<i128> = self.snf.d.clone();
        let mut out = Vec::new();
        let mut k = vec![0i128; d.len()];
        loop {
            out.push(self.character_angles(&k));
            let mut i = 0;
            loop {
                if i == d.len() {
                    return out;
                }
                k[i] += 1;
                if k[i] < d[i].max(1) {
                    break;
                }
                k[i] = 0;
                i += 1;
            }
        }
    }

    /// Angle of `chi(x)` for a unit `x`.
    pub fn evaluate(&self, angles: &[Angle], x: &EElement) -> Result<Angle> {
        let digits = self.dlog(x)?;
        Ok(digits.iter().zip(angles).map(|(&e, &a)| a * (e as i64)).sum())
    }
}
