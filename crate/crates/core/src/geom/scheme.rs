use std::path::Path;

use serde::{Deserialize, Serialize};

use super::form::HomogeneousForm;
use super::monomial::Exponents;
use crate::error::{invalid, Error, Result};
use crate::ff::{is_prime, matrix_rank, ExtField, RingMatrix};

/// A closed subscheme of P^n cut out by integer forms, with declared
/// dimension m. With `p` set it is a variety over F_p; without, an integral
/// model whose fibers are taken at whatever prime the caller asks for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectiveScheme {
    n: usize,
    m: usize,
    p: Option<u64>,
    forms: Vec<HomogeneousForm<i64>>,
}

impl ProjectiveScheme {
    pub fn new(
        n: usize,
        m: usize,
        p: Option<u64>,
        forms: Vec<HomogeneousForm<i64>>,
    ) -> Result<Self> {
        if n < 1 {
            return invalid("ambient dimension must be >= 1");
        }
        if m > n {
            return invalid(format!("dimension {m} exceeds ambient dimension {n}"));
        }
        if forms.is_empty() && m != n {
            return invalid("without defining forms the scheme is P^n, so m must equal n");
        }
        if let Some(p) = p {
            if !is_prime(p) {
                return invalid(format!("{p} is not prime"));
            }
        }
        if let Some(f) = forms.iter().find(|f| f.ambient_dim() != n) {
            return invalid(format!("defining form lives on P^{}, expected P^{n}", f.ambient_dim()));
        }
        Ok(Self { n, m, p, forms })
    }

    /// P^n over Z (or over F_p when `p` is given).
    pub fn projective_space(n: usize, p: Option<u64>) -> Result<Self> {
        Self::new(n, n, p, Vec::new())
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    /// Dimension of X over its base field (of the fibers, for integral models).
    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn prime(&self) -> Option<u64> {
        self.p
    }

    pub fn forms(&self) -> &[HomogeneousForm<i64>] {
        &self.forms
    }

    pub fn is_projective_space(&self) -> bool {
        self.forms.is_empty()
    }

    /// The prime to work over: the scheme's own if set, else `requested`.
    pub fn resolve_prime(&self, requested: Option<u64>) -> Result<u64> {
        match (self.p, requested) {
            (Some(a), Some(b)) if a != b => invalid(format!("scheme is over F_{a}, asked for p = {b}")),
            (Some(a), _) => Ok(a),
            (None, Some(b)) if is_prime(b) => Ok(b),
            (None, Some(b)) => invalid(format!("{b} is not prime")),
            (None, None) => invalid("integral model needs an explicit prime"),
        }
    }

    /// Defining forms reduced mod `modulus`.
    pub fn forms_mod(&self, modulus: u64) -> Vec<HomogeneousForm<u64>> {
        self.forms.iter().map(|f| f.reduce_mod(modulus)).collect()
    }

    /// Check that the fiber over `p` is smooth of dimension m at every point
    /// rational over F_{p^e}, e <= `e_max`: the Jacobian of the defining forms
    /// has rank n - m there.
    pub fn validate_smooth(&self, p: u64, e_max: usize) -> Result<()> {
        let p = self.resolve_prime(Some(p))?;
        for e in 1..=e_max {
            let pts = super::points::rational_points(self, p, e)?;
            for x in &pts.points {
                let rank = jacobian_rank(&self.forms_mod(p), pts.field.as_ref(), x, None);
                if rank != self.n - self.m {
                    return Err(Error::SingularFiber(format!(
                        "Jacobian rank {rank} != {} at {x:?} over F_{p}^{e}",
                        self.n - self.m
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn to_file(&self) -> SchemeFile {
        SchemeFile {
            p: self.p,
            n: self.n,
            m: self.m,
            defining_forms: self.forms.iter().map(|f| f.terms()).collect(),
        }
    }

    pub fn from_file(file: &SchemeFile) -> Result<Self> {
        let mut forms = Vec::with_capacity(file.defining_forms.len());
        for terms in &file.defining_forms {
            let Some((first, _)) = terms.first() else {
                return invalid("defining form with no terms");
            };
            let d = first.iter().sum::<u32>() as usize;
            forms.push(HomogeneousForm::from_terms(file.n, d, terms)?);
        }
        Self::new(file.n, file.m, file.p, forms)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SchemeFile = serde_json::from_str(text)
            .map_err(|e| Error::InvalidInput(format!("bad scheme file: {e}")))?;
        Self::from_file(&file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("scheme serializes")
    }
}

/// On-disk scheme description. Each defining form is a list of
/// `[exponent-vector, coefficient]` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    pub n: usize,
    pub m: usize,
    #[serde(default)]
    pub defining_forms: Vec<Vec<(Exponents, i64)>>,
}

/// Rank of the Jacobian of `forms` at `x` over the given field, dropping
/// column `chart` if given.
pub(crate) fn jacobian_rank(
    forms: &[HomogeneousForm<u64>],
    field: &ExtField,
    x: &[crate::ff::Fq],
    chart: Option<usize>,
) -> usize {
    if forms.is_empty() {
        return 0;
    }
    let n = x.len() - 1;
    let cols: Vec<usize> = (0..=n).filter(|&i| Some(i) != chart).collect();
    let rows: Vec<Vec<_>> = forms
        .iter()
        .map(|g| {
            cols.iter()
                .map(|&i| g.partial_derivative(i).eval(field, x).expect("length checked"))
                .collect()
        })
        .collect();
    matrix_rank(field, &RingMatrix::from_rows(rows, cols.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::form::parse_form;

    #[test]
    fn json_round_trip() {
        let conic = parse_form("X^2+Y^2-Z^2", 2).unwrap().map_coeffs(|c| {
            num_traits::ToPrimitive::to_i64(c).unwrap()
        });
        let s = ProjectiveScheme::new(2, 1, Some(5), vec![conic]).unwrap();
        let back = ProjectiveScheme::from_json(&s.to_json()).unwrap();
        assert_eq!(s, back);
        let p1 = ProjectiveScheme::from_json(r#"{"n":1,"m":1}"#).unwrap();
        assert!(p1.is_projective_space());
        assert_eq!(p1.resolve_prime(Some(3)).unwrap(), 3);
        assert!(p1.resolve_prime(None).is_err());
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(ProjectiveScheme::new(2, 1, None, vec![]).is_err());
        assert!(ProjectiveScheme::new(1, 1, Some(4), vec![]).is_err());
        assert!(ProjectiveScheme::from_json(r#"{"n":2,"m":1,"defining_forms":[[]]}"#).is_err());
    }

    #[test]
    fn smoothness_validation() {
        let conic = ProjectiveScheme::from_json(
            r#"{"p":5,"n":2,"m":1,"defining_forms":[[[[2,0,0],1],[[0,2,0],1],[[0,0,2],-1]]]}"#,
        )
        .unwrap();
        conic.validate_smooth(5, 2).unwrap();
        // (X+Y+Z)^2 over F_2 is a doubled line.
        let double = ProjectiveScheme::from_json(
            r#"{"p":2,"n":2,"m":1,"defining_forms":[[[[2,0,0],1],[[0,2,0],1],[[0,0,2],1]]]}"#,
        )
        .unwrap();
        assert!(matches!(double.validate_smooth(2, 1), Err(Error::SingularFiber(_))));
    }
}
