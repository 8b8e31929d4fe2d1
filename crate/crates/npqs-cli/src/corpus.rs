//! Built-in test-function corpus: constants, coordinate and mixed monomials,
//! a fixed seeded random degree-5 polynomial, kernel powers
//! `(1 − ⟨z,b⟩)^{−t}` and `log(1 − z1)`.

use npqs::sampler::SampleStream;

/// Seed of the random-coefficient polynomial; fixed so the corpus is part of
/// the artifact.
const POLY_SEED: u64 = 0x5EED_D065;

/// Exponents of the kernel-power family shipped by default.
pub const KERNEL_POWERS: [f64; 3] = [0.5, 1.0, 3.0];

/// The default corpus for dimension `n`; every entry parses under `n`.
pub fn default_corpus(n: usize) -> Vec<String> {
    let mut corpus = vec!["1".to_string(), "z1".to_string()];
    if n >= 2 {
        corpus.push("z2".to_string());
        corpus.push("z1*z2".to_string());
    }
    corpus.push("z1^2".to_string());
    corpus.push(random_degree5_polynomial(n));
    for t in KERNEL_POWERS {
        corpus.push(kernel_power(n, t));
    }
    corpus.push("log(1 - z1)".to_string());
    corpus
}

/// `(1 − ⟨z, e1⟩)^{-t}` in the textual grammar.
pub fn kernel_power(n: usize, t: f64) -> String {
    let mut entries = vec!["1".to_string()];
    entries.extend((1..n).map(|_| "0".to_string()));
    format!("(1 - dot(z,[{}]))^-{t}", entries.join(", "))
}

/// Degree-5 polynomial with seeded random complex coefficients over all
/// monomials of total degree 1..=5, rendered in the textual grammar.
pub fn random_degree5_polynomial(n: usize) -> String {
    let mut stream = SampleStream::new(POLY_SEED, 0);
    let mut terms = Vec::new();
    for exponents in monomials(n, 5) {
        // coefficients in [-0.5, 0.5]^2, rounded so the printed form is the
        // exact value used
        let re = ((stream.uniform() - 0.5) * 1e4).round() / 1e4;
        let im = ((stream.uniform() - 0.5) * 1e4).round() / 1e4;
        let mut factors = vec![format!("({re}{}{}i)", if im < 0.0 { "-" } else { "+" }, im.abs())];
        for (var, &m) in exponents.iter().enumerate() {
            match m {
                0 => {}
                1 => factors.push(format!("z{}", var + 1)),
                _ => factors.push(format!("z{}^{m}", var + 1)),
            }
        }
        terms.push(factors.join("*"));
    }
    terms.join(" + ")
}

/// All exponent vectors with total degree 1..=max_degree, in a fixed order.
fn monomials(n: usize, max_degree: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; n];
    fn rec(out: &mut Vec<Vec<u32>>, current: &mut Vec<u32>, var: usize, left: u32) {
        if var == current.len() {
            if current.iter().sum::<u32>() >= 1 {
                out.push(current.clone());
            }
            return;
        }
        for m in 0..=left {
            current[var] = m;
            rec(out, current, var + 1, left - m);
        }
        current[var] = 0;
    }
    rec(&mut out, &mut current, 0, max_degree);
    out
}
