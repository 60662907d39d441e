//! Named instances from the literature, transcribed as published.

use num_traits::{One, Signed, Zero};

use crate::error::{domain, Error, Result};
use crate::model::Instance;
use crate::rational::{int, rat, Rational};

pub const FIXTURE_NAMES: [&str; 6] =
    ["example-3-1", "thm-3-2", "thm-4-4-2agent", "appendix-b2", "ef-one-discard", "example-4-10"];

/// Parameters of the parameterized fixtures. `eps` defaults to 1/4 and must
/// lie in `(0, 1/2)`; `n` is the agent count of `appendix-b2` (default 3).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FixtureParams {
    pub eps: Option<Rational>,
    pub n: Option<usize>,
}

pub fn fixture(name: &str, params: &FixtureParams) -> Result<Instance> {
    let eps = params.eps.clone().unwrap_or_else(|| rat(1, 4));
    if !eps.is_positive() || eps >= rat(1, 2) {
        return Err(domain("eps must lie in (0, 1/2)"));
    }
    match name {
        "example-3-1" => example_3_1(),
        "thm-3-2" => thm_3_2(),
        "thm-4-4-2agent" => thm_4_4(&eps),
        "appendix-b2" => {
            let n = params.n.unwrap_or(3);
            if n < 2 {
                return Err(domain("appendix-b2 needs at least 2 agents"));
            }
            appendix_b2(n, &eps)
        }
        "ef-one-discard" => ef_one_discard(),
        "example-4-10" => example_4_10(&eps),
        other => Err(Error::UnknownFixture(other.to_string())),
    }
}

fn named(
    agents: usize,
    goods: Vec<String>,
    values: Vec<Vec<Rational>>,
    divisible: Vec<Vec<bool>>,
) -> Result<Instance> {
    let agent_names = (1..=agents).map(|i| format!("agent{i}")).collect();
    Instance::new(agent_names, goods, values, divisible)
}

fn goods_from(first: usize, count: usize) -> Vec<String> {
    (first..first + count).map(|g| format!("g{g}")).collect()
}

fn example_3_1() -> Result<Instance> {
    let v = rat(3, 5);
    let d = |gs: &[usize]| (1..=5).map(|g| gs.contains(&g)).collect::<Vec<bool>>();
    named(
        3,
        goods_from(1, 5),
        vec![vec![v.clone(); 5], vec![v.clone(); 5], vec![v; 5]],
        vec![d(&[4, 5]), d(&[1, 2]), d(&[1, 3])],
    )
}

fn thm_3_2() -> Result<Instance> {
    let v = rat(2, 3);
    named(
        2,
        goods_from(1, 3),
        vec![vec![v.clone(); 3], vec![v; 3]],
        vec![vec![false, false, true], vec![false, true, false]],
    )
}

fn thm_4_4(eps: &Rational) -> Result<Instance> {
    appendix_b2(2, eps)
}

/// `g0` is indivisible for all and worth `1 − ε/2` to agents 1 and 2;
/// `g_i` is divisible only for agent `i`. Agents 1 and 2 value `g1`, `g2`
/// at `ε` on their own good and `1 − ε` on the other, and every later
/// `g_i` at 1; agent `i ≥ 3` values only `g_i`.
fn appendix_b2(n: usize, eps: &Rational) -> Result<Instance> {
    let m = n + 1;
    let high = Rational::one() - eps / int(2);
    let low = Rational::one() - eps;
    let mut values = vec![vec![Rational::zero(); m]; n];
    let mut divisible = vec![vec![false; m]; n];
    for i in 0..n {
        divisible[i][i + 1] = true;
    }
    for (a, other) in [(0usize, 1usize), (1, 0)] {
        values[a][0] = high.clone();
        values[a][a + 1] = eps.clone();
        values[a][other + 1] = low.clone();
        for g in 3..m {
            values[a][g] = Rational::one();
        }
    }
    for i in 2..n {
        values[i][i + 1] = Rational::one();
    }
    named(n, goods_from(0, m), values, divisible)
}

fn ef_one_discard() -> Result<Instance> {
    named(2, goods_from(1, 2), vec![vec![int(2), int(1)]; 2], vec![vec![false; 2]; 2])
}

fn example_4_10(eps: &Rational) -> Result<Instance> {
    let d = rat(1, 2) + eps;
    named(
        2,
        goods_from(1, 3),
        vec![vec![Rational::one(), d.clone(), d], vec![Rational::zero(), int(1), int(1)]],
        vec![vec![false, true, true], vec![false; 3]],
    )
}
