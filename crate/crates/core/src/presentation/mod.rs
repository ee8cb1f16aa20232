//! Text presentations of rings `F_p[x_1..x_n]/(f_1..f_m)` and ideals in them,
//! and the check that an ideal is primary to the origin.

mod parser;

use std::fmt;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::groebner::{Colength, GroebnerBasis, GroebnerError, Limits};
use crate::polyfield::{MonomialOrder, OrderKind, Poly, PolyRing, PrimeField};

use parser::{tokenize, Cursor, ExprError, ExprParser, Tok};
pub use parser::{Pos, SyntaxError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("syntax error at {0}")]
    Syntax(SyntaxError),
    #[error("{pos}: {value} is not a prime at most 2^31")]
    NotPrime { value: String, pos: Pos },
    #[error("{pos}: unknown variable `{name}`")]
    UnknownVariable { name: String, pos: Pos },
    #[error("{pos}: variable `{name}` declared twice")]
    DuplicateVariable { name: String, pos: Pos },
    #[error("{}generator {} of `{list}` has a nonzero constant term", .pos.map(|p| format!("{p}: ")).unwrap_or_default(), .index + 1)]
    NonzeroConstant {
        list: &'static str,
        index: usize,
        pos: Option<Pos>,
    },
}

impl From<SyntaxError> for PresentationError {
    fn from(e: SyntaxError) -> Self {
        PresentationError::Syntax(e)
    }
}

impl From<ExprError> for PresentationError {
    fn from(e: ExprError) -> Self {
        match e {
            ExprError::Syntax(s) => PresentationError::Syntax(s),
            ExprError::UnknownVariable(name, pos) => PresentationError::UnknownVariable { name, pos },
        }
    }
}

/// `F_p[x_1..x_n]/(defining)` with a monomial order. The defining
/// polynomials lie in the maximal ideal of the origin.
#[derive(Debug)]
pub struct RingPresentation {
    names: Vec<String>,
    ring: Arc<PolyRing>,
    defining: Vec<Poly>,
    dimension: OnceLock<usize>,
}

impl RingPresentation {
    /// Checks that every defining polynomial has zero constant term and
    /// lives in `ring`.
    pub fn new(names: Vec<String>, ring: Arc<PolyRing>, defining: Vec<Poly>) -> Result<Self, PresentationError> {
        assert_eq!(names.len(), ring.nvars(), "one name per variable");
        assert!(defining.iter().all(|f| **f.ring() == *ring), "defining polynomials in another ring");
        if let Some(index) = defining.iter().position(|f| f.constant_term() != 0) {
            return Err(PresentationError::NonzeroConstant {
                list: "quotient",
                index,
                pos: None,
            });
        }
        Ok(RingPresentation {
            names,
            ring,
            defining,
            dimension: OnceLock::new(),
        })
    }

    pub fn field(&self) -> PrimeField {
        self.ring.field()
    }

    pub fn characteristic(&self) -> u64 {
        self.ring.field().characteristic()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn order_kind(&self) -> OrderKind {
        self.ring.order().kind()
    }

    pub fn defining(&self) -> &[Poly] {
        &self.defining
    }

    /// Krull dimension of the quotient, computed once.
    pub fn dimension(&self) -> usize {
        *self.dimension.get_or_init(|| {
            GroebnerBasis::new(&self.ring, &self.defining)
                .krull_dimension()
                .expect("defining ideal lies in the maximal ideal")
        })
    }

    /// Minimal number of generators of the maximal ideal of the local ring
    /// at the origin: the number of variables minus the rank of the linear
    /// parts of the defining equations.
    pub fn embedding_dimension(&self) -> usize {
        let field = self.field();
        let n = self.nvars();
        let mut rows: Vec<Vec<u64>> = self
            .defining
            .iter()
            .map(|f| {
                let mut row = vec![0; n];
                for (m, c) in f.terms() {
                    if let Some((i, 1)) = m.as_pure_power() {
                        row[i] = *c;
                    }
                }
                row
            })
            .collect();
        let mut rank = 0;
        for col in 0..n {
            let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
                continue;
            };
            rows.swap(rank, pivot);
            let inv = field.inv(rows[rank][col]).expect("nonzero pivot");
            let pivot_row: Vec<u64> = rows[rank].iter().map(|&v| field.mul(v, inv)).collect();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row[col] != 0 {
                    let k = row[col];
                    for (v, &pv) in row.iter_mut().zip(&pivot_row) {
                        *v = field.sub(*v, field.mul(k, pv));
                    }
                }
            }
            rows[rank] = pivot_row;
            rank += 1;
        }
        n - rank
    }

    /// The same presentation under another monomial order.
    pub fn with_order(&self, kind: OrderKind) -> RingPresentation {
        let ring = self.ring.with_order(MonomialOrder::new(kind, self.nvars()));
        let defining = self.defining.iter().map(|f| f.reorder(&ring).unwrap()).collect();
        let dimension = OnceLock::new();
        if let Some(&d) = self.dimension.get() {
            let _ = dimension.set(d);
        }
        RingPresentation {
            names: self.names.clone(),
            ring,
            defining,
            dimension,
        }
    }

    /// The maximal ideal `(x_1, ..., x_n)` of the origin.
    pub fn maximal_ideal(self: &Arc<Self>) -> IdealSpec {
        let gens = (0..self.nvars()).map(|i| Poly::var(&self.ring, i)).collect();
        IdealSpec {
            ring: self.clone(),
            generators: gens,
        }
    }

    /// Parses a comma-separated list of polynomials in this ring, such as
    /// `"x+y, z"`.
    pub fn parse_polys(&self, text: &str) -> Result<Vec<Poly>, PresentationError> {
        let toks = tokenize(text)?;
        let mut cur = Cursor::new(&toks);
        let reader = ExprParser {
            ring: &self.ring,
            names: &self.names,
        };
        Ok(reader.bare_list(&mut cur)?.into_iter().map(|(f, _)| f).collect())
    }

    pub fn display_poly<'a>(&'a self, f: &'a Poly) -> impl fmt::Display + 'a {
        f.display_with(Some(&self.names))
    }
}

impl PartialEq for RingPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.ring == other.ring && self.defining == other.defining
    }
}

impl Eq for RingPresentation {}

/// An ideal of a presented ring, given by generators in the maximal ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealSpec {
    ring: Arc<RingPresentation>,
    generators: Vec<Poly>,
}

impl IdealSpec {
    pub fn new(ring: &Arc<RingPresentation>, generators: Vec<Poly>) -> Result<Self, PresentationError> {
        assert!(generators.iter().all(|f| **f.ring() == **ring.ring()), "generators in another ring");
        if let Some(index) = generators.iter().position(|f| f.constant_term() != 0) {
            return Err(PresentationError::NonzeroConstant {
                list: "ideal",
                index,
                pos: None,
            });
        }
        Ok(IdealSpec {
            ring: ring.clone(),
            generators,
        })
    }

    pub fn ring(&self) -> &Arc<RingPresentation> {
        &self.ring
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    /// Number of given generators, an upper bound for the minimal number.
    pub fn t(&self) -> usize {
        self.generators.len()
    }

    /// Generators together with the defining polynomials of the ring, i.e.
    /// the preimage of the ideal in the polynomial ring.
    pub fn with_defining(&self) -> Vec<Poly> {
        let mut all = self.generators.clone();
        all.extend(self.ring.defining().iter().cloned());
        all
    }

    /// The same ideal over `ring`, which must present the same quotient
    /// under a possibly different order.
    pub fn transfer(&self, ring: &Arc<RingPresentation>) -> IdealSpec {
        IdealSpec {
            ring: ring.clone(),
            generators: self
                .generators
                .iter()
                .map(|f| f.reorder(ring.ring()).expect("same variables"))
                .collect(),
        }
    }
}

/// Knobs carried along with a parsed problem.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TaskParams {
    pub e_max: Option<u32>,
}

/// A ring, an ideal in it, and what to compute.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedProblem {
    pub ring: Arc<RingPresentation>,
    pub ideal: IdealSpec,
    pub params: TaskParams,
}

impl ParsedProblem {
    pub fn new(ideal: IdealSpec) -> Self {
        ParsedProblem {
            ring: ideal.ring().clone(),
            ideal,
            params: TaskParams::default(),
        }
    }

    /// The same problem under another monomial order.
    pub fn with_order(&self, kind: OrderKind) -> ParsedProblem {
        let ring = Arc::new(self.ring.with_order(kind));
        ParsedProblem {
            ideal: self.ideal.transfer(&ring),
            ring,
            params: self.params.clone(),
        }
    }
}

/// Canonical text form, accepted back by [`parse`].
impl fmt::Display for ParsedProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ring = &self.ring;
        write!(f, "p={}; vars={}; quotient=[", ring.characteristic(), ring.names().join(","))?;
        write_list(f, ring, ring.defining())?;
        f.write_str("]; ideal=[")?;
        write_list(f, ring, self.ideal.generators())?;
        f.write_str("];")
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, ring: &RingPresentation, polys: &[Poly]) -> fmt::Result {
    for (k, g) in polys.iter().enumerate() {
        if k > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{}", ring.display_poly(g))?;
    }
    Ok(())
}

/// Parses a presentation under the degrevlex order.
pub fn parse(text: &str) -> Result<ParsedProblem, PresentationError> {
    parse_with_order(text, OrderKind::DegRevLex)
}

/// Parses `p=<int>; vars=<names>; quotient=[...]; ideal=[...];`.
pub fn parse_with_order(text: &str, kind: OrderKind) -> Result<ParsedProblem, PresentationError> {
    let toks = tokenize(text)?;
    let mut cur = Cursor::new(&toks);

    keyword(&mut cur, "p")?;
    let (digits, ppos) = cur.int("the characteristic")?;
    let field = digits
        .parse::<u64>()
        .ok()
        .and_then(|p| PrimeField::new(p).ok())
        .ok_or(PresentationError::NotPrime { value: digits, pos: ppos })?;
    cur.expect(Tok::Semi, "`;`")?;

    keyword(&mut cur, "vars")?;
    let mut names: Vec<String> = Vec::new();
    loop {
        let (name, pos) = cur.ident("a variable name")?;
        if names.contains(&name) {
            return Err(PresentationError::DuplicateVariable { name, pos });
        }
        names.push(name);
        if *cur.peek() != Tok::Comma {
            break;
        }
        cur.bump();
    }
    cur.expect(Tok::Semi, "`,` or `;`")?;

    let ring = PolyRing::new(field, names.len(), MonomialOrder::new(kind, names.len()));
    let reader = ExprParser {
        ring: &ring,
        names: &names,
    };

    keyword(&mut cur, "quotient")?;
    let defining = checked_list(&reader, &mut cur, "quotient")?;
    cur.expect(Tok::Semi, "`;`")?;

    keyword(&mut cur, "ideal")?;
    let generators = checked_list(&reader, &mut cur, "ideal")?;
    if *cur.peek() == Tok::Semi {
        cur.bump();
    }
    if *cur.peek() != Tok::End {
        return Err(cur.error("end of input").into());
    }

    let ring = Arc::new(RingPresentation::new(names, ring, defining)?);
    let ideal = IdealSpec::new(&ring, generators)?;
    Ok(ParsedProblem::new(ideal))
}

fn keyword(cur: &mut Cursor<'_>, word: &str) -> Result<(), SyntaxError> {
    match cur.peek() {
        Tok::Ident(s) if s == word => {
            cur.bump();
            cur.expect(Tok::Eq, "`=`")?;
            Ok(())
        }
        _ => Err(cur.error(&format!("`{word}=`"))),
    }
}

fn checked_list(reader: &ExprParser<'_>, cur: &mut Cursor<'_>, list: &'static str) -> Result<Vec<Poly>, PresentationError> {
    let items = reader.list(cur)?;
    if let Some(index) = items.iter().position(|(f, _)| f.constant_term() != 0) {
        return Err(PresentationError::NonzeroConstant {
            list,
            index,
            pos: Some(items[index].1),
        });
    }
    Ok(items.into_iter().map(|(f, _)| f).collect())
}

/// Certificate that `I + defining` has finite colength and vanishes only at
/// the origin: `x_i^{exponents[i]}` lies in the ideal for every `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OriginCertificate {
    pub exponents: Vec<u32>,
    pub colength: u64,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OriginError {
    #[error("infinite colength")]
    InfiniteColength,
    #[error("support off origin: no power of `{variable}` lies in the ideal")]
    SupportOffOrigin { variable: String },
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
}

/// Verifies that `I + defining` is primary to the origin by finding, for
/// each variable, the least power with normal form zero. In an artinian
/// quotient of length `L` a nilpotent element has index at most `L`, so the
/// search stops there.
pub fn validate_origin_primary(ideal: &IdealSpec) -> Result<OriginCertificate, OriginError> {
    validate_origin_primary_with(ideal, &Limits::none())
}

pub fn validate_origin_primary_with(ideal: &IdealSpec, limits: &Limits<'_>) -> Result<OriginCertificate, OriginError> {
    let ring = ideal.ring();
    let gb = GroebnerBasis::with_limits(ring.ring(), &ideal.with_defining(), limits)?;
    let Colength::Finite(len) = gb.colength() else {
        return Err(OriginError::InfiniteColength);
    };
    let mut exponents = Vec::with_capacity(ring.nvars());
    for i in 0..ring.nvars() {
        let x = Poly::var(ring.ring(), i);
        let mut power = gb.normal_form(&x);
        let mut n = 1u32;
        while !power.is_zero() {
            if n as u64 >= len {
                return Err(OriginError::SupportOffOrigin {
                    variable: ring.names()[i].clone(),
                });
            }
            power = gb.normal_form(&(&power * &x));
            n += 1;
        }
        exponents.push(if len == 0 { 0 } else { n });
    }
    Ok(OriginCertificate { exponents, colength: len })
}
