//! Structure constants as exact integer data, with the Jacobi identity and
//! the sign automorphisms checked in integer arithmetic.

use crate::generator::{Combo, Gen, Point6};
use crate::LieError;

/// Integer combination of generators, indexed like [`Gen::ALL`].
pub type IntVec = [i64; 15];

/// Commutation table of a Lie algebra over a list of named generators.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureTable {
    pub name: String,
    pub order: Vec<Gen>,
    cells: Vec<Vec<IntVec>>,
}

const FOURTEEN: [&str; 15] = [
    "B1: 0, 2B1, -D2, 0, 0, 0, 0, 0, -B4, B3, 0, 0, -P2, P1",
    "D2: -2B1, 0, 2B2, 0, 0, 0, -B3, -B4, B5, B6, -P1, -P2, P3, P4",
    "B2: D2, -2B2, 0, 0, 0, 0, B6, -B5, 0, 0, P4, -P3, 0, 0",
    "D1: 0, 0, 0, 0, 0, 0, -B3, -B4, -B5, -B6, -P1, -P2, -P3, -P4",
    "L: 0, 0, 0, 0, 0, 0, -B4, B3, -B6, B5, -P2, P1, -P4, P3",
    "P5: 0, 0, 0, 0, 0, 0, P1, P2, P3, P4, 0, 0, 0, 0",
    "B3: 0, B3, -B6, B3, B4, -P1, 0, 0, 0, 0, 0, 0, 0, 0",
    "B4: 0, B4, B5, B4, -B3, -P2, 0, 0, 0, 0, 0, 0, 0, 0",
    "B5: B4, -B5, 0, B5, B6, -P3, 0, 0, 0, 0, 0, 0, 0, 0",
    "B6: -B3, -B6, 0, B6, -B5, -P4, 0, 0, 0, 0, 0, 0, 0, 0",
    "P1: 0, P1, -P4, P1, P2, 0, 0, 0, 0, 0, 0, 0, 0, 0",
    "P2: 0, P2, P3, P2, -P1, 0, 0, 0, 0, 0, 0, 0, 0, 0",
    "P3: P2, -P3, 0, P3, P4, 0, 0, 0, 0, 0, 0, 0, 0, 0",
    "P4: -P1, -P4, 0, P4, -P3, 0, 0, 0, 0, 0, 0, 0, 0, 0",
    // Column order; the header row of the table.
    "B1 D2 B2 D1 L P5 B3 B4 B5 B6 P1 P2 P3 P4",
];

const SEVEN: [&str; 8] = [
    "B1: 0, 2B1, -D2, 0, 0, 0, 0",
    "D2: -2B1, 0, 2B2, 0, 0, 0, 0",
    "B2: D2, -2B2, 0, 0, 0, 0, 0",
    "K: 0, 0, 0, 0, -P5, -L, 0",
    "L: 0, 0, 0, P5, 0, 0, 0",
    "P5: 0, 0, 0, L, 0, 0, 0",
    "D1: 0, 0, 0, 0, 0, 0, 0",
    "B1 D2 B2 K L P5 D1",
];

/// Parse `"2B1 - D2"`-style integer combinations; `"0"` is the zero vector.
pub fn parse_int_combo(s: &str) -> Result<IntVec, LieError> {
    let mut out = [0; 15];
    let s = s.replace(' ', "");
    if s == "0" {
        return Ok(out);
    }
    let mut rest = s.as_str();
    while !rest.is_empty() {
        let (sign, body) = match rest.as_bytes()[0] {
            b'-' => (-1, &rest[1..]),
            b'+' => (1, &rest[1..]),
            _ => (1, rest),
        };
        let end = body.find(['+', '-']).unwrap_or(body.len());
        let term = &body[..end];
        let digits = term.find(|c: char| !c.is_ascii_digit()).unwrap_or(term.len());
        let k: i64 = if digits == 0 {
            1
        } else {
            term[..digits].parse().map_err(|_| LieError::UnknownGenerator(term.to_string()))?
        };
        let g: Gen = term[digits..].parse()?;
        out[g.index()] += sign * k;
        rest = &body[end..];
    }
    Ok(out)
}

fn int_to_combo(c: &IntVec) -> Combo {
    Combo::from_coefficients(&c.map(|k| k as f64))
}

impl StructureTable {
    /// Rows are `"NAME: e1, e2, …"`; the last line lists the column order.
    fn from_rows(name: &str, rows: &[&str]) -> Result<Self, LieError> {
        let (header, body) = rows.split_last().expect("table has a header");
        let order: Vec<Gen> = header.split_whitespace().map(str::parse).collect::<Result<_, _>>()?;
        let mut cells = vec![vec![[0; 15]; order.len()]; order.len()];
        for row in body {
            let (head, entries) = row.split_once(':').expect("row has a label");
            let g: Gen = head.trim().parse()?;
            let i = order.iter().position(|&o| o == g).expect("row label is a column");
            let parsed: Vec<IntVec> = entries.split(',').map(parse_int_combo).collect::<Result<_, _>>()?;
            assert_eq!(parsed.len(), order.len(), "row {g} has the wrong length");
            cells[i] = parsed;
        }
        Ok(StructureTable { name: name.to_string(), order, cells })
    }

    /// The fourteen-dimensional algebra without `K`.
    pub fn fourteen() -> Self {
        Self::from_rows("L", &FOURTEEN).expect("built-in table parses")
    }

    /// The seven-dimensional algebra `{B1, D2, B2, K, L, P5, D1}`.
    pub fn seven() -> Self {
        Self::from_rows("S", &SEVEN).expect("built-in table parses")
    }

    pub fn dim(&self) -> usize {
        self.order.len()
    }

    pub fn position(&self, g: Gen) -> Option<usize> {
        self.order.iter().position(|&o| o == g)
    }

    /// `[X_i, X_j]` by table position.
    pub fn cell(&self, i: usize, j: usize) -> &IntVec {
        &self.cells[i][j]
    }

    pub fn entry(&self, a: Gen, b: Gen) -> Option<Combo> {
        Some(int_to_combo(&self.cells[self.position(a)?][self.position(b)?]))
    }

    /// Replace the single cell `[a, b]` (its mirror is left alone).
    pub fn with_cell(mut self, a: Gen, b: Gen, entry: &str) -> Result<Self, LieError> {
        let i = self.position(a).ok_or(LieError::NotInTable(a))?;
        let j = self.position(b).ok_or(LieError::NotInTable(b))?;
        self.cells[i][j] = parse_int_combo(entry)?;
        Ok(self)
    }

    /// Cells `(i, j)` with `c[i][j] ≠ −c[j][i]`.
    pub fn antisymmetry_violations(&self) -> Vec<(Gen, Gen)> {
        let mut out = Vec::new();
        for i in 0..self.dim() {
            for j in i..self.dim() {
                let (a, b) = (&self.cells[i][j], &self.cells[j][i]);
                if a.iter().zip(b).any(|(p, q)| p + q != 0) {
                    out.push((self.order[i], self.order[j]));
                }
            }
        }
        out
    }

    /// Bilinear extension of the table to integer combinations. Components
    /// outside the table's basis make the result undefined.
    pub fn bracket(&self, a: &IntVec, b: &IntVec) -> Option<IntVec> {
        let mut out = [0; 15];
        for (&g, &ka) in Gen::ALL.iter().zip(a) {
            if ka == 0 {
                continue;
            }
            let i = self.position(g)?;
            for (&h, &kb) in Gen::ALL.iter().zip(b) {
                if kb == 0 {
                    continue;
                }
                let j = self.position(h)?;
                for (o, c) in out.iter_mut().zip(&self.cells[i][j]) {
                    *o += ka * kb * c;
                }
            }
        }
        Some(out)
    }
}

fn unit(g: Gen) -> IntVec {
    let mut v = [0; 15];
    v[g.index()] = 1;
    v
}

#[derive(Debug, Clone, PartialEq)]
pub struct JacobiReport {
    pub triples: usize,
    /// Triples whose cyclic sum is nonzero or leaves the table's basis.
    pub failures: Vec<(Gen, Gen, Gen)>,
}

impl JacobiReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `[X,[Y,Z]] + [Y,[Z,X]] + [Z,[X,Y]] = 0` for every triple of distinct
/// basis elements, using only the table.
pub fn jacobi_check(table: &StructureTable) -> JacobiReport {
    let n = table.dim();
    let mut failures = Vec::new();
    let mut triples = 0;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                triples += 1;
                let (x, y, z) = (unit(table.order[i]), unit(table.order[j]), unit(table.order[k]));
                let cyc = [(&x, &y, &z), (&y, &z, &x), (&z, &x, &y)];
                let sum = cyc.iter().try_fold([0; 15], |mut acc, (a, b, c)| {
                    let inner = table.bracket(b, c)?;
                    for (s, t) in acc.iter_mut().zip(table.bracket(a, &inner)?) {
                        *s += t;
                    }
                    Some(acc)
                });
                if sum.map_or(true, |s| s.iter().any(|&c| c != 0)) {
                    failures.push((table.order[i], table.order[j], table.order[k]));
                }
            }
        }
    }
    JacobiReport { triples, failures }
}

/// The two discrete point symmetries: rotation by π in the `(x, y)` plane
/// and in the `(u, v)` plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reflection {
    R1,
    R2,
}

impl Reflection {
    /// Sign the induced automorphism attaches to each generator.
    pub fn sign(self, g: Gen) -> i64 {
        use Gen::*;
        let flipped = match self {
            Reflection::R1 => matches!(g, B1 | B2 | B3 | B4 | P1 | P2),
            Reflection::R2 => matches!(g, B1 | B2 | B5 | B6 | P3 | P4),
        };
        if flipped {
            -1
        } else {
            1
        }
    }

    pub fn point_map(self, p: &Point6) -> Point6 {
        let [x, y, s, t, u, v] = *p;
        match self {
            Reflection::R1 => [-x, -y, s, t, u, v],
            Reflection::R2 => [x, y, s, t, -u, -v],
        }
    }

    pub fn apply(self, c: &Combo) -> Combo {
        Combo::new(c.terms.iter().map(|&(k, g)| (k * self.sign(g) as f64, g)).collect())
    }

    pub fn apply_int(self, c: &IntVec) -> IntVec {
        let mut out = *c;
        for (o, g) in out.iter_mut().zip(Gen::ALL) {
            *o *= self.sign(g);
        }
        out
    }
}

/// Pairs whose table entry is not carried to the entry of the image pair.
pub fn automorphism_check(table: &StructureTable, r: Reflection) -> Vec<(Gen, Gen)> {
    let mut bad = Vec::new();
    for (i, &a) in table.order.iter().enumerate() {
        for (j, &b) in table.order.iter().enumerate() {
            let image = table.cell(i, j).map(|c| c * r.sign(a) * r.sign(b));
            if image != r.apply_int(table.cell(i, j)) {
                bad.push((a, b));
            }
        }
    }
    bad
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integer_combinations() {
        let v = parse_int_combo("2B1 - D2 + P3").unwrap();
        assert_eq!(v[Gen::B1.index()], 2);
        assert_eq!(v[Gen::D2.index()], -1);
        assert_eq!(v[Gen::P3.index()], 1);
        assert_eq!(parse_int_combo("0").unwrap(), [0; 15]);
        assert!(parse_int_combo("-P_y").is_err());
    }

    #[test]
    fn shipped_tables_are_antisymmetric() {
        assert!(StructureTable::fourteen().antisymmetry_violations().is_empty());
        assert!(StructureTable::seven().antisymmetry_violations().is_empty());
    }

    #[test]
    fn jacobi_holds_exactly() {
        let r = jacobi_check(&StructureTable::fourteen());
        assert_eq!(r.triples, 364);
        assert!(r.passed(), "{:?}", r.failures);
        let r = jacobi_check(&StructureTable::seven());
        assert_eq!(r.triples, 35);
        assert!(r.passed());
    }

    #[test]
    fn flipped_sign_breaks_jacobi() {
        let t = StructureTable::fourteen()
            .with_cell(Gen::B3, Gen::B2, "B6")
            .unwrap()
            .with_cell(Gen::B2, Gen::B3, "-B6")
            .unwrap();
        assert!(!jacobi_check(&t).passed());
    }

    #[test]
    fn reflections_are_automorphisms() {
        for r in [Reflection::R1, Reflection::R2] {
            assert!(automorphism_check(&StructureTable::fourteen(), r).is_empty());
            assert!(automorphism_check(&StructureTable::seven(), r).is_empty());
        }
        assert_eq!(Reflection::R1.apply(&Gen::B3.into()), Combo::new(vec![(-1.0, Gen::B3)]));
        assert_eq!(Reflection::R2.apply(&Gen::P3.into()), Combo::new(vec![(-1.0, Gen::P3)]));
    }

    #[test]
    fn reflection_is_an_involution() {
        let c = Combo::new(Gen::ALL.iter().enumerate().map(|(i, &g)| (i as f64 - 3.5, g)).collect());
        for r in [Reflection::R1, Reflection::R2] {
            assert_eq!(r.apply(&r.apply(&c)), c);
        }
    }
}
