//! Shared rings and memoized products for one verifier run.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use ogring::{
    psi_substitute, res, shat_set, ChowElement, ChowRing, CoeffMode, Error, GeneratorExpression, IndexFamilies, ReesElement,
    ReesRing, Result, RingParams,
};

use crate::certificate::Engine;

/// `c · f(1)^k · f(F) · g(G)`, the shape of every Rees-side element the suites evaluate.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    pub scalar: i64,
    pub f1: u64,
    pub f: Vec<u32>,
    pub g: Vec<u32>,
}

impl Word {
    pub fn new(f1: u64, f: &[u32], g: &[u32]) -> Self {
        let mut f = f.to_vec();
        let mut g = g.to_vec();
        f.sort_unstable();
        g.sort_unstable();
        Word { scalar: 1, f1, f, g }
    }

    pub fn scaled(mut self, c: i64) -> Self {
        self.scalar *= c;
        self
    }

    pub fn grade(&self) -> u64 {
        self.f1 + self.f.iter().chain(&self.g).map(|&i| u64::from(i)).sum::<u64>()
    }

    pub fn expr(&self) -> GeneratorExpression {
        use GeneratorExpression as E;
        let mut factors = Vec::new();
        if self.scalar != 1 {
            factors.push(E::int(self.scalar));
        }
        if self.f1 > 0 {
            factors.push(E::pow(E::F(1), self.f1));
        }
        factors.extend(self.f.iter().map(|&i| E::F(i)));
        factors.extend(self.g.iter().map(|&i| E::G(i)));
        E::Product(factors)
    }

    fn key(&self) -> (u64, Vec<u32>, Vec<u32>) {
        (self.f1, self.f.clone(), self.g.clone())
    }
}

/// Splits a product of integers, `e(i)` and powers of `e(1)` into `(c, k, multiset)` with
/// value `c · e(1)^k · e(multiset)`.
pub fn flatten_chow_word(expr: &GeneratorExpression) -> Option<(BigInt, u64, Vec<u32>)> {
    use GeneratorExpression as E;
    fn walk(e: &E, c: &mut BigInt, k: &mut u64, set: &mut Vec<u32>) -> bool {
        match e {
            E::Int(x) => {
                *c *= x;
                true
            }
            E::Ei(1) => {
                *k += 1;
                true
            }
            E::Ei(i) => {
                set.push(*i);
                true
            }
            E::Power(b, p) if **b == E::Ei(1) => {
                *k += p;
                true
            }
            E::Product(v) => v.iter().all(|x| walk(x, c, k, set)),
            _ => false,
        }
    }
    let (mut c, mut k, mut set) = (BigInt::from(1), 0, Vec::new());
    walk(expr, &mut c, &mut k, &mut set).then(|| {
        set.sort_unstable();
        (c, k, set)
    })
}

type Chain = Arc<Mutex<BTreeMap<u64, Arc<ChowElement>>>>;
type Slot<T> = Arc<OnceLock<Result<Arc<T>>>>;

pub struct Context {
    params: RingParams,
    seed: u64,
    rees: ReesRing,
    chow: ChowRing,
    f1_powers: Mutex<BTreeMap<u64, Arc<ReesElement>>>,
    words: Mutex<HashMap<(u64, Vec<u32>, Vec<u32>), Slot<ReesElement>>>,
    chains: Mutex<HashMap<String, Chain>>,
}

impl Context {
    pub fn new(n: u32, coeff_mode: CoeffMode, seed: u64) -> Result<Self> {
        let params = RingParams::new(n, coeff_mode)?;
        Ok(Context {
            params,
            seed,
            rees: ReesRing::new(params),
            chow: ChowRing::new(params),
            f1_powers: Mutex::new(BTreeMap::new()),
            words: Mutex::new(HashMap::new()),
            chains: Mutex::new(HashMap::new()),
        })
    }

    pub fn n(&self) -> u32 {
        self.params.n
    }

    pub fn params(&self) -> RingParams {
        self.params
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn engine(&self) -> Engine {
        Engine { coeff_mode: self.params.coeff_mode.to_string(), version: env!("CARGO_PKG_VERSION").into(), seed: self.seed }
    }

    pub fn rees(&self) -> &ReesRing {
        &self.rees
    }

    pub fn chow(&self) -> &ChowRing {
        &self.chow
    }

    pub fn families(&self) -> Result<IndexFamilies> {
        IndexFamilies::new(self.params.n)
    }

    /// `v(ind X)`.
    pub fn m(&self) -> Result<u32> {
        self.params.torsion_exponent().ok_or(Error::NotPowerOfTwo(self.params.n))
    }

    /// `f(1)^k`, extended from the largest power computed so far.
    pub fn f1_pow(&self, k: u64) -> Result<Arc<ReesElement>> {
        let mut powers = self.f1_powers.lock().unwrap();
        if let Some(x) = powers.get(&k) {
            return Ok(x.clone());
        }
        let (start, base) = match powers.range(..k).next_back() {
            Some((&j, x)) => (j, (**x).clone()),
            None => (0, self.rees.one()),
        };
        let x = Arc::new(self.rees.pieri_pow(1, k - start, &base)?);
        powers.insert(k, x.clone());
        Ok(x)
    }

    /// Value of a word in the Rees ring, memoized up to the scalar.
    pub fn rees_word(&self, w: &Word) -> Result<ReesElement> {
        let slot = self.words.lock().unwrap().entry(w.key()).or_default().clone();
        let value = slot
            .get_or_init(|| {
                let x = self.f1_pow(w.f1)?;
                let x = self.rees.mul_g_set(&w.g, &x)?;
                Ok(Arc::new(self.rees.mul_f_set(&w.f, &x)?))
            })
            .clone()?;
        Ok(if w.scalar == 1 { (*value).clone() } else { value.scale(&BigInt::from(w.scalar)) })
    }

    /// `e(1)^k · base`, where `label` names `base`; the chain for each label is extended
    /// from its largest computed power.
    pub fn chow_e1_times(&self, label: &str, base: impl FnOnce() -> Result<ChowElement>, k: u64) -> Result<Arc<ChowElement>> {
        let chain = self.chains.lock().unwrap().entry(label.to_string()).or_default().clone();
        let mut chain = chain.lock().unwrap();
        if chain.is_empty() {
            chain.insert(0, Arc::new(base()?));
        }
        let (&start, x) = chain.range(..=k).next_back().expect("chain has its base");
        if start == k {
            return Ok(x.clone());
        }
        let mut x = (**x).clone();
        for _ in start..k {
            x = self.chow.mul_generator(&x, 1);
        }
        let x = Arc::new(x);
        chain.insert(k, x.clone());
        Ok(x)
    }

    /// `e(1)^k · e(S)` for a multiset `S`.
    pub fn chow_word(&self, k: u64, set: &[u32]) -> Result<Arc<ChowElement>> {
        let mut set = set.to_vec();
        set.sort_unstable();
        let label = format!("e{set:?}");
        self.chow_e1_times(&label, || Ok(self.chow.product_of_generators(set.iter().copied())), k)
    }

    /// `e(1)^k · res(Ŝ(L))`.
    pub fn chow_shat(&self, k: u64, set: &[u32]) -> Result<Arc<ChowElement>> {
        let label = format!("resS{set:?}");
        self.chow_e1_times(&label, || res(&shat_set(set, self.params.n)?, &self.chow), k)
    }

    /// The image of a Rees-side word under `ψ`, through `psi_substitute`.
    pub fn psi_word(&self, w: &Word) -> Result<ChowElement> {
        let image = psi_substitute(&w.expr());
        let (c, k, set) = flatten_chow_word(&image).ok_or_else(|| Error::MalformedInput(format!("not a monomial word: {image}")))?;
        Ok(self.chow_word(k, &set)?.scale(&c))
    }

    /// `y = f(1)^{n²/4-1} g(J)`.
    pub fn y(&self) -> Result<ReesElement> {
        let fam = self.families()?;
        self.rees_word(&Word::new(self.quarter_square() - 1, &[], &fam.j))
    }

    /// `z = f(1)^{n²/4-2} g(J')`.
    pub fn z(&self) -> Result<ReesElement> {
        let fam = self.families()?;
        self.rees_word(&Word::new(self.quarter_square() - 2, &[], &fam.j_prime()))
    }

    /// `e(1)^{n²/4-1} res(Ŝ(J))`.
    pub fn w(&self) -> Result<Arc<ChowElement>> {
        let fam = self.families()?;
        self.chow_shat(self.quarter_square() - 1, &fam.j)
    }

    /// `n²/4`.
    pub fn quarter_square(&self) -> u64 {
        u64::from(self.params.n) * u64::from(self.params.n) / 4
    }
}
