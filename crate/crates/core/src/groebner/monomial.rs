//! Associated primes of monomial ideals via irreducible decomposition.
//! Used as an independent oracle for purity checks.

use crate::algebra::Mono;

/// An irreducible monomial ideal `(x_i^{a_i} : i in support)`, stored as
/// exponents with zero meaning "variable absent".
type Irreducible = Vec<u32>;

fn minimalize(gens: &mut Vec<Mono>) {
    gens.sort_by_key(|m| m.degree());
    gens.dedup();
    let mut out: Vec<Mono> = Vec::new();
    for g in gens.iter() {
        if !out.iter().any(|o| o.divides(g)) {
            out.push(*g);
        }
    }
    *gens = out;
}

fn decompose(mut gens: Vec<Mono>, nvars: usize, out: &mut Vec<Irreducible>) {
    minimalize(&mut gens);
    if gens.iter().any(Mono::is_one) {
        return;
    }
    let mixed = gens.iter().position(|g| g.support().count_ones() > 1);
    match mixed {
        None => {
            let mut q = vec![0; nvars];
            for g in &gens {
                let v = (0..nvars).find(|&v| g.exp(v) > 0).unwrap();
                q[v] = g.exp(v);
            }
            out.push(q);
        }
        Some(k) => {
            let g = gens[k];
            let v = (0..nvars).find(|&v| g.exp(v) > 0).unwrap();
            let mut pe = vec![0u32; nvars];
            pe[v] = g.exp(v);
            let u = Mono::from_exps(&pe);
            let rest = u.quotient(&g);
            let mut a = gens.clone();
            a.push(u);
            let mut b = gens;
            b.push(rest);
            decompose(a, nvars, out);
            decompose(b, nvars, out);
        }
    }
}

/// `a ⊆ b` for irreducible monomial ideals.
fn contained(a: &Irreducible, b: &Irreducible) -> bool {
    a.iter().zip(b).all(|(&x, &y)| x == 0 || (y != 0 && y <= x))
}

/// Irredundant irreducible decomposition of the monomial ideal.
pub fn irreducible_components(gens: &[Mono], nvars: usize) -> Vec<Irreducible> {
    let mut all = Vec::new();
    decompose(gens.to_vec(), nvars, &mut all);
    all.sort();
    all.dedup();
    let keep: Vec<Irreducible> = all
        .iter()
        .filter(|q| !all.iter().any(|o| o != *q && contained(o, q)))
        .cloned()
        .collect();
    keep
}

/// Associated primes as variable bitmasks, sorted by height then mask.
pub fn associated_primes(gens: &[Mono], nvars: usize) -> Vec<u32> {
    let mut out: Vec<u32> = irreducible_components(gens, nvars)
        .iter()
        .map(|q| q.iter().enumerate().filter(|(_, &e)| e > 0).fold(0, |m, (i, _)| m | (1 << i)))
        .collect();
    out.sort_by_key(|&m| (m.count_ones(), m));
    out.dedup();
    out
}

/// True iff every associated prime has height `codim`.
pub fn is_pure_codimension(gens: &[Mono], nvars: usize, codim: usize) -> bool {
    let ass = associated_primes(gens, nvars);
    !ass.is_empty() && ass.iter().all(|m| m.count_ones() as usize == codim)
}
