//! Brute-force Tate groups of small finite modules: cochain enumeration,
//! fixed points modulo norms and norm kernels modulo augmentation.
#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};
use std::sync::Arc;

use num_bigint::BigInt;

use hypertate::gmodules::GModule;
use hypertate::groups::FiniteGroup;
use hypertate::linalg::IntMatrix;

pub type Vector = Vec<i64>;

/// `Z/n_1 + ... + Z/n_k` with an action, small enough to enumerate.
pub struct Finite {
    pub g: Arc<FiniteGroup>,
    pub moduli: Vec<i64>,
    pub action: Vec<Vec<Vec<i64>>>,
}

impl Finite {
    /// `(Z/n)^k`, the action given on generators of the group.
    pub fn new(g: FiniteGroup, n: i64, k: usize, gens: &[(usize, Vec<Vec<i64>>)]) -> Finite {
        let ord = g.order();
        let mut action: Vec<Option<Vec<Vec<i64>>>> = vec![None; ord];
        let id: Vec<Vec<i64>> = (0..k).map(|i| (0..k).map(|j| i64::from(i == j)).collect()).collect();
        action[g.identity()] = Some(id);
        let mut queue = VecDeque::from([g.identity()]);
        while let Some(x) = queue.pop_front() {
            for (s, a) in gens {
                let y = g.mul(*s, x);
                if action[y].is_none() {
                    let ax = action[x].clone().unwrap();
                    let prod = (0..k)
                        .map(|i| (0..k).map(|j| (0..k).map(|l| a[i][l] * ax[l][j]).sum::<i64>().rem_euclid(n)).collect())
                        .collect();
                    action[y] = Some(prod);
                    queue.push_back(y);
                }
            }
        }
        let action = action.into_iter().map(|a| a.expect("generators generate")).collect();
        Finite { g: Arc::new(g), moduli: vec![n; k], action }
    }

    /// The normalized presentation of a finite module; `None` if it has a free part.
    pub fn from_module(m: &GModule) -> Option<Finite> {
        let m = m.normalize().module;
        let moduli: Vec<i64> = (0..m.gens())
            .map(|i| if i < m.relators().cols() { i64::try_from(m.relators().get(i, i)).ok() } else { None })
            .collect::<Option<_>>()?;
        let action = m
            .actions()
            .iter()
            .map(|a| a.to_rows().iter().map(|r| r.iter().map(|x| i64::try_from(x).unwrap()).collect()).collect())
            .collect();
        Some(Finite { g: m.group().clone(), moduli, action })
    }

    pub fn k(&self) -> usize {
        self.moduli.len()
    }

    pub fn module(&self) -> GModule {
        let d: Vec<BigInt> = self.moduli.iter().map(|&n| BigInt::from(n)).collect();
        let rel = IntMatrix::diagonal(self.k(), self.k(), &d);
        let acts = self.action.iter().map(|a| IntMatrix::from_rows(a)).collect();
        GModule::new(self.g.clone(), self.k(), rel, acts).expect("valid module")
    }

    pub fn elements(&self) -> Vec<Vector> {
        (0..self.size())
            .map(|mut c| {
                self.moduli
                    .iter()
                    .map(|&n| {
                        let d = (c % n as usize) as i64;
                        c /= n as usize;
                        d
                    })
                    .collect()
            })
            .collect()
    }

    fn act(&self, g: usize, v: &[i64]) -> Vector {
        let a = &self.action[g];
        (0..self.k()).map(|i| (0..self.k()).map(|j| a[i][j] * v[j]).sum::<i64>().rem_euclid(self.moduli[i])).collect()
    }

    fn add(&self, a: &[i64], b: &[i64]) -> Vector {
        a.iter().zip(b).zip(&self.moduli).map(|((x, y), n)| (x + y).rem_euclid(*n)).collect()
    }

    fn sub(&self, a: &[i64], b: &[i64]) -> Vector {
        a.iter().zip(b).zip(&self.moduli).map(|((x, y), n)| (x - y).rem_euclid(*n)).collect()
    }

    fn zero(&self) -> Vector {
        vec![0; self.k()]
    }

    pub fn size(&self) -> usize {
        self.moduli.iter().map(|&n| n as usize).product()
    }

    fn norm(&self, v: &[i64]) -> Vector {
        self.g.elements().fold(self.zero(), |acc, g| self.add(&acc, &self.act(g, v)))
    }

    fn span(&self, seeds: &[Vector]) -> BTreeSet<Vector> {
        let mut set = BTreeSet::from([self.zero()]);
        let mut queue: VecDeque<Vector> = VecDeque::from([self.zero()]);
        while let Some(x) = queue.pop_front() {
            for s in seeds {
                let y = self.add(&x, s);
                if set.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        set
    }

    pub fn h0(&self) -> usize {
        let all = self.elements();
        let fixed = all.iter().filter(|v| self.g.elements().all(|g| self.act(g, v) == **v)).count();
        let norms: BTreeSet<Vector> = all.iter().map(|v| self.norm(v)).collect();
        fixed / norms.len()
    }

    pub fn h_minus1(&self) -> usize {
        let all = self.elements();
        let kernel = all.iter().filter(|v| self.norm(v) == self.zero()).count();
        let seeds: Vec<Vector> =
            all.iter().flat_map(|v| self.g.elements().map(move |g| (g, v))).map(|(g, v)| self.sub(&self.act(g, v), v)).collect();
        kernel / self.span(&seeds).len()
    }

    /// Normalized 1-cochains `f` with `f(gh) = f(g) + g f(h)`.
    pub fn crossed_homs(&self) -> usize {
        let ord = self.g.order();
        let e = self.g.identity();
        let others: Vec<usize> = self.g.elements().filter(|&g| g != e).collect();
        let all = self.elements();
        let mut count = 0;
        let mut f = vec![self.zero(); ord];
        let total = self.size().pow(others.len() as u32);
        for mut code in 0..total {
            for &g in &others {
                f[g] = all[code % all.len()].clone();
                code /= all.len();
            }
            let ok = self.g.elements().all(|g| {
                self.g.elements().all(|h| f[self.g.mul(g, h)] == self.add(&f[g], &self.act(g, &f[h])))
            });
            count += usize::from(ok);
        }
        count
    }

    pub fn h1(&self) -> usize {
        let principal: BTreeSet<Vector> = self
            .elements()
            .iter()
            .map(|m| self.g.elements().flat_map(|g| self.sub(&self.act(g, m), m)).collect())
            .collect();
        self.crossed_homs() / principal.len()
    }

    /// `|Z²_norm| · |Z¹| / |M|^{|G|-1}`.
    pub fn h2(&self) -> usize {
        let g = &self.g;
        let e = g.identity();
        let others: Vec<usize> = g.elements().filter(|&x| x != e).collect();
        let pairs: Vec<(usize, usize)> = others.iter().flat_map(|&a| others.iter().map(move |&b| (a, b))).collect();
        let all = self.elements();
        let ord = g.order();
        let mut f = vec![self.zero(); ord * ord];
        let total = self.size().pow(pairs.len() as u32);
        let mut cocycles = 0usize;
        for mut code in 0..total {
            for &(a, b) in &pairs {
                f[a * ord + b] = all[code % all.len()].clone();
                code /= all.len();
            }
            let ok = g.elements().all(|x| {
                g.elements().all(|y| {
                    g.elements().all(|z| {
                        let lhs = self.add(&self.act(x, &f[y * ord + z]), &f[x * ord + g.mul(y, z)]);
                        let rhs = self.add(&f[g.mul(x, y) * ord + z], &f[x * ord + y]);
                        lhs == rhs
                    })
                })
            });
            cocycles += usize::from(ok);
        }
        cocycles * self.crossed_homs() / self.size().pow(others.len() as u32)
    }
}

pub fn trivial(g: FiniteGroup, n: i64) -> Finite {
    let gens: Vec<(usize, Vec<Vec<i64>>)> = g.elements().map(|x| (x, vec![vec![1]])).collect();
    Finite::new(g, n, 1, &gens)
}

pub fn neg(k: usize) -> Vec<Vec<i64>> {
    (0..k).map(|i| (0..k).map(|j| if i == j { -1 } else { 0 }).collect()).collect()
}
