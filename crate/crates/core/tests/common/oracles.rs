use std::collections::HashMap;

use devs_consanguinity::genetics::ConsanguinityDegree;

/// Pedigree where founders have no parents.
#[derive(Default)]
pub struct Pedigree {
    pub parents: HashMap<&'static str, (&'static str, &'static str)>,
}

impl Pedigree {
    pub fn child(&mut self, name: &'static str, father: &'static str, mother: &'static str) -> &mut Self {
        self.parents.insert(name, (father, mother));
        self
    }

    /// Every upward path from `who`, as the list of individuals visited.
    pub fn ancestral_paths(&self, who: &'static str) -> Vec<Vec<&'static str>> {
        let mut out = vec![vec![who]];
        if let Some(&(a, b)) = self.parents.get(who) {
            for p in [a, b] {
                for mut path in self.ancestral_paths(p) {
                    path.insert(0, who);
                    out.push(path);
                }
            }
        }
        out
    }

    /// Sum of (1/2)^(n1+n2+1) over pairs of paths from the two parents to a
    /// common ancestor that meet only at that ancestor. Founders are
    /// non-inbred.
    pub fn f_by_path_counting(&self, father: &'static str, mother: &'static str) -> f64 {
        let up_f = self.ancestral_paths(father);
        let up_m = self.ancestral_paths(mother);
        let mut f = 0.0;
        for a in &up_f {
            for b in &up_m {
                if a.last() != b.last() {
                    continue;
                }
                let shared = a.iter().filter(|x| b.contains(x)).count();
                if shared != 1 {
                    continue;
                }
                let n1 = a.len() as i32 - 1;
                let n2 = b.len() as i32 - 1;
                f += 0.5f64.powi(n1 + n2 + 1);
            }
        }
        f
    }

    fn depth(&self, who: &str) -> usize {
        match self.parents.get(who) {
            Some(&(a, b)) => 1 + self.depth(a).max(self.depth(b)),
            None => 0,
        }
    }

    /// Kinship by the recursive definition; the inbreeding coefficient of a
    /// child is the kinship of its parents.
    pub fn kinship(&self, x: &'static str, y: &'static str) -> f64 {
        if x == y {
            let f = self.parents.get(x).map_or(0.0, |&(a, b)| self.kinship(a, b));
            return 0.5 * (1.0 + f);
        }
        // Recurse through whichever individual is deeper, so it is never an
        // ancestor of the other.
        let (x, y) = if self.depth(x) >= self.depth(y) { (x, y) } else { (y, x) };
        match self.parents.get(x) {
            Some(&(a, b)) => 0.5 * (self.kinship(a, y) + self.kinship(b, y)),
            None => 0.0,
        }
    }
}

/// Pedigrees ending in a couple (X, Y) related by the given degree.
pub fn pedigree(degree: ConsanguinityDegree) -> Pedigree {
    let mut p = Pedigree::default();
    p.child("P1", "G1", "G2").child("P2", "G1", "G2");
    match degree {
        ConsanguinityDegree::Unrelated => {
            p.parents.clear();
            p.child("X", "A", "B").child("Y", "C", "D");
        }
        ConsanguinityDegree::FirstCousin => {
            p.child("X", "P1", "s1").child("Y", "s2", "P2");
        }
        ConsanguinityDegree::FirstCousinOnceRemoved => {
            p.child("X", "P1", "s1").child("Z", "s2", "P2").child("Y", "Z", "s3");
        }
        ConsanguinityDegree::SecondCousin => {
            p.child("Q1", "P1", "s1").child("Q2", "s2", "P2");
            p.child("X", "Q1", "s3").child("Y", "s4", "Q2");
        }
        ConsanguinityDegree::ThirdCousin => {
            p.child("Q1", "P1", "s1").child("Q2", "s2", "P2");
            p.child("R1", "Q1", "s3").child("R2", "s4", "Q2");
            p.child("X", "R1", "s5").child("Y", "s6", "R2");
        }
    }
    p
}

/// Exact rationals, just enough for genotype enumeration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ratio(pub u128, pub u128);

impl Ratio {
    fn reduce(self) -> Ratio {
        fn gcd(a: u128, b: u128) -> u128 {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        let g = gcd(self.0, self.1).max(1);
        Ratio(self.0 / g, self.1 / g)
    }
    fn add(self, o: Ratio) -> Ratio {
        Ratio(self.0 * o.1 + o.0 * self.1, self.1 * o.1).reduce()
    }
    fn mul(self, o: Ratio) -> Ratio {
        Ratio(self.0 * o.0, self.1 * o.1).reduce()
    }
    pub fn complement(self) -> Ratio {
        Ratio(self.1 - self.0, self.1)
    }
    pub fn to_f64(self) -> f64 {
        self.0 as f64 / self.1 as f64
    }
}

/// P(child is aa): with probability f the two alleles are copies of one
/// ancestral allele, otherwise they are drawn independently.
pub fn affected_by_enumeration(q: Ratio, f: Ratio) -> Ratio {
    let alleles = [(false, q.complement()), (true, q)];
    let mut total = Ratio(0, 1);
    for (ibd, p_ibd) in [(true, f), (false, f.complement())] {
        for &(first, p1) in &alleles {
            if ibd {
                if first {
                    total = total.add(p_ibd.mul(p1));
                }
                continue;
            }
            for &(second, p2) in &alleles {
                if first && second {
                    total = total.add(p_ibd.mul(p1).mul(p2));
                }
            }
        }
    }
    total
}

