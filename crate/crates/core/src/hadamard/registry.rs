use std::collections::BTreeMap;
use std::fmt;

use super::construct::{base, paley1, paley2, sylvester};
use super::HadamardMatrix;
use crate::error::{Error, Result};
use crate::numtheory::Sieve;

pub const DEFAULT_REGISTRY_BOUND: usize = 20_000;

/// One way to build a matrix of a given order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Recipe {
    Base,
    /// `H(a) ⊗ H(b)`, both members of the registry.
    Sylvester(usize, usize),
    Paley1(u64),
    Paley2(u64),
    /// Index into the registry's user-supplied matrices.
    External(usize),
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Recipe::Base => f.write_str("base"),
            Recipe::Sylvester(a, b) => write!(f, "sylvester({a}x{b})"),
            Recipe::Paley1(q) => write!(f, "paley1(q={q})"),
            Recipe::Paley2(q) => write!(f, "paley2(q={q})"),
            Recipe::External(i) => write!(f, "external(#{i})"),
        }
    }
}

/// Recipe family a caller may ask for explicitly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecipeKind {
    Auto,
    Sylvester,
    Paley1,
    Paley2,
}

impl std::str::FromStr for RecipeKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "auto" => Ok(Self::Auto),
            "sylvester" => Ok(Self::Sylvester),
            "paley1" => Ok(Self::Paley1),
            "paley2" => Ok(Self::Paley2),
            other => Err(format!("unknown recipe `{other}`")),
        }
    }
}

impl fmt::Display for RecipeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Auto => "auto",
            Self::Sylvester => "sylvester",
            Self::Paley1 => "paley1",
            Self::Paley2 => "paley2",
        })
    }
}

/// Orders we can construct up to a bound: the product closure of
/// `{1, 2} ∪ {q + 1 : q ≡ 3 mod 4} ∪ {2(q + 1) : q ≡ 1 mod 4}` (q prime),
/// plus any user-supplied matrices.
#[derive(Debug, Clone)]
pub struct OrderRegistry {
    bound: usize,
    recipes: BTreeMap<usize, Recipe>,
    external: Vec<HadamardMatrix>,
}

impl Default for OrderRegistry {
    fn default() -> Self {
        Self::new(DEFAULT_REGISTRY_BOUND)
    }
}

impl OrderRegistry {
    pub fn new(bound: usize) -> Self {
        Self::with_external(bound, Vec::new())
    }

    /// Registry including user-supplied matrices (e.g. an order-92 file).
    /// Their orders join the product closure.
    pub fn with_external(bound: usize, external: Vec<HadamardMatrix>) -> Self {
        let bound = bound.max(2);
        let mut generators: BTreeMap<usize, Recipe> = BTreeMap::new();
        let sieve = Sieve::new(bound as u64);
        for q in sieve.primes_in(2, bound as u64).expect("within sieve") {
            let order = q as usize + 1;
            if q % 4 == 3 {
                generators.entry(order).or_insert(Recipe::Paley1(q));
            } else if 2 * order <= bound {
                generators.entry(2 * order).or_insert(Recipe::Paley2(q));
            }
        }
        for (i, h) in external.iter().enumerate() {
            if h.order() <= bound {
                generators.entry(h.order()).or_insert(Recipe::External(i));
            }
        }

        let mut recipes = BTreeMap::new();
        recipes.insert(1, Recipe::Base);
        recipes.insert(2, Recipe::Base);
        for n in 3..=bound {
            let product = (2..)
                .take_while(|a| a * a <= n)
                .find(|a| n % a == 0 && recipes.contains_key(a) && recipes.contains_key(&(n / a)))
                .map(|a| Recipe::Sylvester(a, n / a));
            if let Some(recipe) = product.or_else(|| generators.get(&n).copied()) {
                recipes.insert(n, recipe);
            }
        }
        Self {
            bound,
            recipes,
            external,
        }
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn contains(&self, order: usize) -> bool {
        self.recipes.contains_key(&order)
    }

    pub fn recipe(&self, order: usize) -> Option<Recipe> {
        self.recipes.get(&order).copied()
    }

    pub fn orders(&self) -> impl Iterator<Item = usize> + '_ {
        self.recipes.keys().copied()
    }

    /// Smallest member `≥ n`.
    pub fn n_bar(&self, n: usize) -> Result<usize> {
        self.recipes
            .range(n.max(1)..)
            .next()
            .map(|(&k, _)| k)
            .ok_or(Error::RegistryExhausted {
                n,
                bound: self.bound,
            })
    }

    /// Largest member `< n`, or 0 when there is none (n = 1).
    pub fn n_under(&self, n: usize) -> usize {
        self.recipes
            .range(..n)
            .next_back()
            .map_or(0, |(&k, _)| k)
    }

    /// `n̄ − n_under`.
    pub fn gap(&self, n: usize) -> Result<usize> {
        Ok(self.n_bar(n)? - self.n_under(n))
    }

    /// `n̄ / n`.
    pub fn c(&self, n: usize) -> Result<f64> {
        Ok(self.n_bar(n)? as f64 / n as f64)
    }

    /// Executes the registered recipe for `order`.
    pub fn build(&self, order: usize) -> Result<HadamardMatrix> {
        let recipe = self.recipe(order).ok_or(Error::NoRecipe {
            order,
            recipe: "auto".into(),
        })?;
        self.run(order, recipe)
    }

    /// Builds `order` with a specific recipe family.
    pub fn build_with(&self, order: usize, kind: RecipeKind) -> Result<HadamardMatrix> {
        let no_recipe = || Error::NoRecipe {
            order,
            recipe: kind.to_string(),
        };
        match kind {
            RecipeKind::Auto => self.build(order),
            RecipeKind::Paley1 => {
                let q = order.checked_sub(1).ok_or_else(no_recipe)? as u64;
                paley1(q)
            }
            RecipeKind::Paley2 => {
                if order % 2 != 0 || order < 4 {
                    return Err(no_recipe());
                }
                paley2((order / 2 - 1) as u64)
            }
            RecipeKind::Sylvester => {
                let (a, b) = (2..)
                    .take_while(|a| a * a <= order)
                    .find(|a| order % a == 0 && self.contains(*a) && self.contains(order / a))
                    .map(|a| (a, order / a))
                    .ok_or_else(no_recipe)?;
                Ok(sylvester(&self.build(a)?, &self.build(b)?))
            }
        }
    }

    fn run(&self, order: usize, recipe: Recipe) -> Result<HadamardMatrix> {
        match recipe {
            Recipe::Base => Ok(base(order)),
            Recipe::Sylvester(a, b) => Ok(sylvester(&self.build(a)?, &self.build(b)?)),
            Recipe::Paley1(q) => paley1(q),
            Recipe::Paley2(q) => paley2(q),
            Recipe::External(i) => Ok(self.external[i].clone()),
        }
    }
}
