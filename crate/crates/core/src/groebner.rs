//! Reduced Gröbner bases in the canonical graded order (used for ideal membership).

use crate::poly::Poly;

/// Remainder of `f` on division by `g`, fully reduced.
pub fn reduce<const N: usize>(f: &Poly<N>, g: &[Poly<N>]) -> Poly<N> {
    let mut p = f.clone();
    let mut r = Poly::zero();
    'outer: loop {
        let (m, c) = match p.leading() {
            Some((m, c)) => (*m, c.clone()),
            None => break,
        };
        for gi in g {
            let (gm, gc) = gi.leading().expect("nonzero basis element");
            if let Some(q) = m.div(gm) {
                let coef = &c / gc;
                p -= &gi.mul_mono(&q, &coef);
                continue 'outer;
            }
        }
        p.add_term(m, -c.clone());
        r.add_term(m, c);
    }
    r
}

fn s_poly<const N: usize>(a: &Poly<N>, b: &Poly<N>) -> Poly<N> {
    let (am, ac) = a.leading().unwrap();
    let (bm, bc) = b.leading().unwrap();
    let mut l = [0u32; N];
    for i in 0..N {
        l[i] = am.0[i].max(bm.0[i]);
    }
    let l = crate::poly::Mono(l);
    let qa = l.div(am).unwrap();
    let qb = l.div(bm).unwrap();
    &a.mul_mono(&qa, &ac.recip()) - &b.mul_mono(&qb, &bc.recip())
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
pub fn groebner<const N: usize>(gens: &[Poly<N>]) -> Vec<Poly<N>> {
    let mut g: Vec<Poly<N>> = gens.iter().filter(|p| !p.is_zero()).map(|p| p.monic()).collect();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 0..g.len() {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    while let Some((i, j)) = pairs.pop() {
        let (am, bm) = (g[i].leading().unwrap().0, g[j].leading().unwrap().0);
        // Coprime leading monomials: the S-polynomial reduces to zero.
        if (0..N).all(|k| am.0[k] == 0 || bm.0[k] == 0) {
            continue;
        }
        let r = reduce(&s_poly(&g[i], &g[j]), &g);
        if !r.is_zero() {
            let n = g.len();
            g.push(r.monic());
            for k in 0..n {
                pairs.push((k, n));
            }
        }
    }
    // Minimize and inter-reduce.
    let mut min: Vec<Poly<N>> = Vec::new();
    for (i, p) in g.iter().enumerate() {
        let pm = p.leading().unwrap().0;
        let redundant = g.iter().enumerate().any(|(j, q)| {
            let qm = q.leading().unwrap().0;
            j != i && pm.div(qm).is_some() && (pm != qm || j < i)
        });
        if !redundant {
            min.push(p.clone());
        }
    }
    let mut out = Vec::new();
    for i in 0..min.len() {
        let others: Vec<Poly<N>> = min.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p.clone()).collect();
        let (m, c) = min[i].leading().map(|(m, c)| (*m, c.clone())).unwrap();
        let tail = &min[i] - &Poly::term(m, c.clone());
        let reduced = &Poly::term(m, c) + &reduce(&tail, &others);
        out.push(reduced.monic());
    }
    out.sort_by(|a, b| a.leading().unwrap().0.cmp(b.leading().unwrap().0));
    out
}

/// Whether `f` lies in the ideal with Gröbner basis `g`.
pub fn in_ideal<const N: usize>(f: &Poly<N>, g: &[Poly<N>]) -> bool {
    reduce(f, g).is_zero()
}
