//! Concrete ASCII syntax: parser, pretty-printer, proof scripts.
//!
//! Token choices: `0` for the empty set, `w` for the ordinal set, `id0` for
//! the inactive function, `in` for membership, `->>` for surjection, `|->`
//! for mapping, `/\ \/ -> <-> ~` for connectives, `all`/`ex` quantifiers
//! with sorts declared at the binder (`all a:thing`) or inferred from the
//! Greek/Roman spelling convention, `all-ur f_{xi} in X` for the multiple
//! quantifier, `bigwedge_{xi in X}` for the conjunctive operator, `succ(t)`
//! for the singleton former, `[a b]` for matrices, and `Y^X` for graph
//! spaces. A full grammar reference lives in `docs/grammar.ebnf`.

mod lex;
pub mod print;
pub mod script;

pub use print::pretty_print;
pub use script::parse_proof_script;

use crate::syntax::{substitute, well_formed, Formula, LanguageId, Name, Term, WfDiagnostic};
use lex::{lex, Spanned, Tok};
use thiserror::Error;

/// 1-based position of a token or node in the source text.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SourceSpan {
    pub line: u32,
    pub column: u32,
    pub length: u32,
}

/// Syntax error: where, what was expected, what was found.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{}:{}: expected {}, found {found}", span.line, span.column, expected.join(" or "))]
pub struct ParseError {
    pub span: SourceSpan,
    pub expected: Vec<String>,
    pub found: String,
}

/// Span tree mirroring the AST: children ordered as in node paths
/// (terms first, then subformulas).
#[derive(Clone, Debug)]
pub struct SpanTree {
    pub span: SourceSpan,
    pub children: Vec<SpanTree>,
}

impl SpanTree {
    fn leaf(span: SourceSpan) -> SpanTree {
        SpanTree { span, children: vec![] }
    }

    /// Look up the span for a node path; falls back to the root span.
    pub fn lookup(&self, path: &[usize]) -> SourceSpan {
        let mut node = self;
        for &i in path {
            match node.children.get(i) {
                Some(c) => node = c,
                None => return self.span,
            }
        }
        node.span
    }
}

/// A parsed formula together with per-node source spans.
#[derive(Clone, Debug)]
pub struct Parsed {
    pub formula: Formula,
    pub spans: SpanTree,
}

/// A well-formedness violation with its source position.
#[derive(Clone, Debug)]
pub struct SpannedWf {
    pub span: SourceSpan,
    pub diagnostic: WfDiagnostic,
}

/// Parse failure: either malformed syntax or a formula outside the language.
#[derive(Clone, Debug, Error)]
pub enum FormulaError {
    #[error("{0}")]
    Syntax(ParseError),
    #[error("formula is not well-formed in {lang}: {}", issues.iter().map(|i| i.diagnostic.to_string()).collect::<Vec<_>>().join("; "))]
    IllFormed { lang: &'static str, issues: Vec<SpannedWf> },
}

/// Parse a formula and check it against the given language.
pub fn parse_formula(text: &str, lang: LanguageId) -> Result<Parsed, FormulaError> {
    let parsed = parse_formula_raw(text).map_err(FormulaError::Syntax)?;
    let diags = well_formed(&parsed.formula, lang);
    if diags.is_empty() {
        Ok(parsed)
    } else {
        let issues = diags
            .into_iter()
            .map(|d| SpannedWf { span: parsed.spans.lookup(&d.path), diagnostic: d })
            .collect();
        Err(FormulaError::IllFormed { lang: lang.as_str(), issues })
    }
}

/// Parse a formula without any language check.
pub fn parse_formula_raw(text: &str) -> Result<Parsed, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser::new(toks);
    let node = p.formula()?;
    p.expect_eof()?;
    Ok(Parsed { formula: node.ast, spans: node.spans })
}

/// Parse a formula file: one formula per line, `#` comments, and
/// `# language: <id>` pragmas switching the language for later lines.
pub fn parse_formula_file(
    text: &str,
    default_lang: LanguageId,
) -> Result<Vec<(usize, LanguageId, Formula)>, FormulaError> {
    let mut lang = default_lang;
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if let Some(rest) = trimmed.strip_prefix('#') {
            if let Some(l) = rest.trim().strip_prefix("language:") {
                if let Some(id) = LanguageId::parse(l.trim()) {
                    lang = id;
                }
            }
            continue;
        }
        if trimmed.is_empty() {
            continue;
        }
        let parsed = parse_formula(trimmed, lang).map_err(|e| adjust_line(e, idx as u32))?;
        out.push((idx + 1, lang, parsed.formula));
    }
    Ok(out)
}

fn adjust_line(e: FormulaError, line_offset: u32) -> FormulaError {
    fn fix(s: SourceSpan, off: u32) -> SourceSpan {
        SourceSpan { line: s.line + off, ..s }
    }
    match e {
        FormulaError::Syntax(mut pe) => {
            pe.span = fix(pe.span, line_offset);
            FormulaError::Syntax(pe)
        }
        FormulaError::IllFormed { lang, issues } => FormulaError::IllFormed {
            lang,
            issues: issues
                .into_iter()
                .map(|mut i| {
                    i.span = fix(i.span, line_offset);
                    i
                })
                .collect(),
        },
    }
}

const GREEK: &[&str] = &[
    "alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta", "iota", "kappa",
    "lambda", "mu", "nu", "xi", "omicron", "rho", "sigma", "upsilon", "phi", "chi", "psi",
];

const RESERVED: &[&str] =
    &["all", "ex", "in", "notin", "sub", "succ", "bigwedge", "set", "thing", "fun", "graph"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum VarKind {
    Set,
    Thing,
}

/// Constant if it ends in `hat`; thing if the base is a spelled Greek
/// letter optionally followed by digits; set otherwise.
fn classify(name: &str) -> (VarKind, bool) {
    let (base, is_const) = match name.strip_suffix("hat") {
        Some(b) if !b.is_empty() => (b, true),
        _ => (name, false),
    };
    let is_greek = GREEK.iter().any(|g| {
        base.strip_prefix(g).map(|rest| rest.chars().all(|c| c.is_ascii_digit())).unwrap_or(false)
    });
    (if is_greek { VarKind::Thing } else { VarKind::Set }, is_const)
}

/// Classification used by the printer to decide binder annotations.
pub(crate) fn classify_for_print(name: &str) -> &'static str {
    let (kind, is_const) = classify(name);
    if is_const {
        "const"
    } else {
        match kind {
            VarKind::Set => "set",
            VarKind::Thing => "thing",
        }
    }
}

struct Node<A> {
    ast: A,
    spans: SpanTree,
}

type FNode = Node<Formula>;
type TNode = Node<Term>;

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    scope: Vec<(Name, VarKind)>,
}

impl Parser {
    fn new(toks: Vec<Spanned>) -> Parser {
        Parser { toks, pos: 0, scope: Vec::new() }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].tok
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].span
    }

    fn prev_span(&self) -> SourceSpan {
        self.toks[self.pos.saturating_sub(1)].span
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, expected: &[&str]) -> ParseError {
        ParseError {
            span: self.span(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().describe(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<SourceSpan, ParseError> {
        if *self.peek() == tok {
            let s = self.span();
            self.bump();
            Ok(s)
        } else {
            Err(self.err(&[what]))
        }
    }

    fn expect_eof(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.err(&["end of input"]))
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, SourceSpan), ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let sp = self.span();
                self.bump();
                Ok((s, sp))
            }
            _ => Err(self.err(&[what])),
        }
    }

    fn lookup_kind(&self, name: &str) -> VarKind {
        self.scope
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, k)| *k)
            .unwrap_or_else(|| classify(name).0)
    }

    // ---- formulas ----

    fn formula(&mut self) -> Result<FNode, ParseError> {
        self.iff_level()
    }

    fn iff_level(&mut self) -> Result<FNode, ParseError> {
        let left = self.imp_level()?;
        if *self.peek() == Tok::Iff {
            self.bump();
            let right = self.iff_level()?;
            Ok(binary(left, right, Formula::iff))
        } else {
            Ok(left)
        }
    }

    fn imp_level(&mut self) -> Result<FNode, ParseError> {
        let left = self.or_level()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let right = self.imp_level()?;
            Ok(binary(left, right, Formula::implies))
        } else {
            Ok(left)
        }
    }

    fn or_level(&mut self) -> Result<FNode, ParseError> {
        let left = self.and_level()?;
        if *self.peek() == Tok::OrOp {
            self.bump();
            let right = self.or_level()?;
            Ok(binary(left, right, Formula::or))
        } else {
            Ok(left)
        }
    }

    fn and_level(&mut self) -> Result<FNode, ParseError> {
        let left = self.unary_level()?;
        if *self.peek() == Tok::AndOp {
            self.bump();
            let right = self.and_level()?;
            Ok(binary(left, right, Formula::and))
        } else {
            Ok(left)
        }
    }

    fn unary_level(&mut self) -> Result<FNode, ParseError> {
        match self.peek() {
            Tok::Tilde => {
                let sp = self.span();
                self.bump();
                let inner = self.unary_level()?;
                Ok(FNode {
                    ast: Formula::not(inner.ast),
                    spans: SpanTree { span: sp, children: vec![inner.spans] },
                })
            }
            _ => self.atom_level(),
        }
    }

    fn atom_level(&mut self) -> Result<FNode, ParseError> {
        match self.peek().clone() {
            Tok::Ident(kw) if kw == "all" || kw == "ex" => {
                let forall = kw == "all";
                self.quantifier(forall, false)
            }
            Tok::ExBang => self.quantifier(false, true),
            Tok::AllUr => self.multi_quantifier(),
            Tok::Ident(kw) if kw == "bigwedge" => self.conj_op(),
            Tok::LParen => {
                // Could be a grouped formula or a pair term starting an atom.
                let save = self.pos;
                match self.term_atom() {
                    Ok(n) => Ok(n),
                    Err(_) => {
                        self.pos = save;
                        self.expect(Tok::LParen, "`(`")?;
                        let inner = self.formula()?;
                        self.expect(Tok::RParen, "`)`")?;
                        Ok(inner)
                    }
                }
            }
            _ => self.term_atom(),
        }
    }

    fn quantifier(&mut self, forall: bool, unique: bool) -> Result<FNode, ParseError> {
        let kw_span = self.span();
        self.bump(); // all | ex | ex!
        let (name, name_span) = self.ident("a variable name")?;
        if RESERVED.contains(&name.as_str()) {
            return Err(ParseError {
                span: name_span,
                expected: vec!["a variable name".into()],
                found: format!("reserved word `{name}`"),
            });
        }
        // Composite binder: name_{domain}.
        if *self.peek() == Tok::Underscore && *self.peek2() == Tok::LBrace {
            self.bump();
            self.bump();
            let domain = self.composite_domain()?;
            self.expect(Tok::RBrace, "`}`")?;
            if *self.peek() == Tok::Colon {
                self.bump();
                let (kind, ksp) = self.ident("`fun`")?;
                if kind != "fun" {
                    return Err(ParseError {
                        span: ksp,
                        expected: vec!["`fun`".into()],
                        found: kind,
                    });
                }
            }
            if unique {
                return Err(ParseError {
                    span: kw_span,
                    expected: vec!["a set or thing binder".into()],
                    found: "unique quantifier over a function variable".into(),
                });
            }
            self.expect(Tok::Dot, "`.`")?;
            let body = self.formula()?;
            let ast = if forall {
                Formula::ForallFun { graph: name, domain: domain.ast, body: Box::new(body.ast) }
            } else {
                Formula::ExistsFun { graph: name, domain: domain.ast, body: Box::new(body.ast) }
            };
            return Ok(FNode {
                ast,
                spans: SpanTree { span: kw_span, children: vec![domain.spans, body.spans] },
            });
        }
        // Optional sort annotation.
        let mut kind = self.lookup_kind(&name);
        if *self.peek() == Tok::Colon {
            self.bump();
            let (k, ksp) = self.ident("`set` or `thing`")?;
            kind = match k.as_str() {
                "set" => VarKind::Set,
                "thing" => VarKind::Thing,
                other => {
                    return Err(ParseError {
                        span: ksp,
                        expected: vec!["`set`".into(), "`thing`".into()],
                        found: other.to_string(),
                    })
                }
            };
        }
        // Bounded sugar: `in <term>` or `!= <term>`.
        let mut bound: Option<(bool, TNode)> = None;
        match self.peek() {
            Tok::Ident(s) if s == "in" => {
                self.bump();
                let t = self.term()?;
                bound = Some((true, t));
            }
            Tok::Neq => {
                self.bump();
                let t = self.term()?;
                bound = Some((false, t));
            }
            _ => {}
        }
        self.expect(Tok::Dot, "`.`")?;
        self.scope.push((name.clone(), kind));
        let body = self.formula()?;
        self.scope.pop();

        let var = match kind {
            VarKind::Set => Term::SetVar(name.clone()),
            VarKind::Thing => Term::ThingVar(name.clone()),
        };
        let mut body_ast = body.ast;
        let mut body_spans = body.spans;
        if unique {
            // ex! b . P  ==>  ex b . (P /\ all b' . (P[b:=b'] -> b' = b))
            let fresh = fresh_against(&body_ast, &name);
            let fresh_var = match kind {
                VarKind::Set => Term::SetVar(fresh.clone()),
                VarKind::Thing => Term::ThingVar(fresh.clone()),
            };
            let renamed = substitute(&body_ast, &var, &fresh_var).map_err(|e| ParseError {
                span: kw_span,
                expected: vec!["a substitutable unique-quantifier body".into()],
                found: e.to_string(),
            })?;
            let uni = Formula::implies(renamed, Formula::Eq(fresh_var.clone(), var.clone()));
            let all = match kind {
                VarKind::Set => Formula::ForallSet(fresh, Box::new(uni)),
                VarKind::Thing => Formula::ForallThing(fresh, Box::new(uni)),
            };
            body_ast = Formula::and(body_ast, all);
            body_spans = synth(kw_span, vec![body_spans, synth_deep(kw_span)]);
        }
        if let Some((is_mem, t)) = bound {
            let guard = if is_mem {
                Formula::Mem(var.clone(), t.ast)
            } else {
                Formula::not(Formula::Eq(var.clone(), t.ast))
            };
            let guard_spans = synth(kw_span, vec![synth_deep(kw_span), t.spans]);
            if forall {
                body_ast = Formula::implies(guard, body_ast);
            } else {
                body_ast = Formula::and(guard, body_ast);
            }
            body_spans = synth(kw_span, vec![guard_spans, body_spans]);
        }
        let ast = match (forall, kind) {
            (true, VarKind::Set) => Formula::ForallSet(name, Box::new(body_ast)),
            (false, VarKind::Set) => Formula::ExistsSet(name, Box::new(body_ast)),
            (true, VarKind::Thing) => Formula::ForallThing(name, Box::new(body_ast)),
            (false, VarKind::Thing) => Formula::ExistsThing(name, Box::new(body_ast)),
        };
        Ok(FNode { ast, spans: SpanTree { span: kw_span, children: vec![body_spans] } })
    }

    fn multi_quantifier(&mut self) -> Result<FNode, ParseError> {
        let kw_span = self.span();
        self.bump(); // all-ur
        let (family, _) = self.ident("a family name")?;
        self.expect(Tok::Underscore, "`_`")?;
        self.expect(Tok::LBrace, "`{`")?;
        let (index, _) = self.ident("an index variable")?;
        self.expect(Tok::RBrace, "`}`")?;
        let (kw, kwsp) = self.ident("`in`")?;
        if kw != "in" {
            return Err(ParseError { span: kwsp, expected: vec!["`in`".into()], found: kw });
        }
        let set = self.term()?;
        self.expect(Tok::Dot, "`.`")?;
        self.scope.push((index.clone(), VarKind::Thing));
        let body = self.formula()?;
        self.scope.pop();
        Ok(FNode {
            ast: Formula::MultiForallUr {
                family,
                index,
                index_set: set.ast,
                body: Box::new(body.ast),
            },
            spans: SpanTree { span: kw_span, children: vec![set.spans, body.spans] },
        })
    }

    fn conj_op(&mut self) -> Result<FNode, ParseError> {
        let kw_span = self.span();
        self.bump(); // bigwedge
        self.expect(Tok::Underscore, "`_`")?;
        self.expect(Tok::LBrace, "`{`")?;
        let (index, _) = self.ident("an index variable")?;
        let (kw, kwsp) = self.ident("`in`")?;
        if kw != "in" {
            return Err(ParseError { span: kwsp, expected: vec!["`in`".into()], found: kw });
        }
        let set = self.term()?;
        self.expect(Tok::RBrace, "`}`")?;
        self.scope.push((index.clone(), VarKind::Thing));
        let body = self.formula()?;
        self.scope.pop();
        Ok(FNode {
            ast: Formula::ConjOp { index, index_set: set.ast, body: Box::new(body.ast) },
            spans: SpanTree { span: kw_span, children: vec![set.spans, body.spans] },
        })
    }

    fn term_atom(&mut self) -> Result<FNode, ParseError> {
        let start = self.span();
        let t1 = self.term()?;
        match self.peek().clone() {
            Tok::Eq => {
                self.bump();
                let t2 = self.term()?;
                Ok(atom2(start, Formula::Eq(t1.ast, t2.ast), t1.spans, t2.spans))
            }
            Tok::Neq => {
                self.bump();
                let t2 = self.term()?;
                let eq = atom2(start, Formula::Eq(t1.ast, t2.ast), t1.spans, t2.spans);
                Ok(FNode {
                    ast: Formula::not(eq.ast),
                    spans: SpanTree { span: start, children: vec![eq.spans] },
                })
            }
            Tok::Ident(s) if s == "in" => {
                self.bump();
                let t2 = self.term()?;
                Ok(atom2(start, Formula::Mem(t1.ast, t2.ast), t1.spans, t2.spans))
            }
            Tok::Ident(s) if s == "notin" => {
                self.bump();
                let t2 = self.term()?;
                let mem = atom2(start, Formula::Mem(t1.ast, t2.ast), t1.spans, t2.spans);
                Ok(FNode {
                    ast: Formula::not(mem.ast),
                    spans: SpanTree { span: start, children: vec![mem.spans] },
                })
            }
            Tok::Ident(s) if s == "sub" => {
                // t1 sub t2  ==>  all v . (v in t1 -> v in t2)
                self.bump();
                let t2 = self.term()?;
                let fresh = fresh_against_terms(&[&t1.ast, &t2.ast]);
                let v = Term::ThingVar(fresh.clone());
                let body =
                    Formula::implies(Formula::Mem(v.clone(), t1.ast), Formula::Mem(v, t2.ast));
                Ok(FNode {
                    ast: Formula::ForallThing(fresh, Box::new(body)),
                    spans: synth(
                        start,
                        vec![synth(
                            start,
                            vec![
                                synth(start, vec![synth_deep(start), t1.spans]),
                                synth(start, vec![synth_deep(start), t2.spans]),
                            ],
                        )],
                    ),
                })
            }
            Tok::Colon => {
                self.bump();
                let t2 = self.term()?;
                let arrow = self.bump();
                let mk: fn(Term, Term, Term) -> Formula = match arrow {
                    Tok::SurjArrow => Formula::Surj,
                    Tok::MapsArrow => Formula::Maps,
                    other => {
                        return Err(ParseError {
                            span: self.prev_span(),
                            expected: vec!["`->>`".into(), "`|->`".into()],
                            found: other.describe(),
                        })
                    }
                };
                let t3 = self.term()?;
                Ok(FNode {
                    ast: mk(t1.ast, t2.ast, t3.ast),
                    spans: SpanTree { span: start, children: vec![t1.spans, t2.spans, t3.spans] },
                })
            }
            _ => Err(self.err(&["`=`", "`!=`", "`in`", "`notin`", "`sub`", "`:`"])),
        }
    }

    // ---- terms ----

    fn term(&mut self) -> Result<TNode, ParseError> {
        let mut base = self.primary_term()?;
        loop {
            match self.peek() {
                Tok::Caret => {
                    self.bump();
                    let exp = self.primary_term()?;
                    let span = base.spans.span;
                    base = TNode {
                        ast: Term::exponent(base.ast, exp.ast),
                        spans: synth(span, vec![base.spans, exp.spans]),
                    };
                }
                Tok::LParen
                    if matches!(base.ast, Term::FunComposite { .. } | Term::InactiveFn) =>
                {
                    self.bump();
                    let arg = self.term()?;
                    self.expect(Tok::RParen, "`)`")?;
                    let span = base.spans.span;
                    base = TNode {
                        ast: Term::image(base.ast, arg.ast),
                        spans: synth(span, vec![base.spans, arg.spans]),
                    };
                }
                _ => break,
            }
        }
        Ok(base)
    }

    /// Domain inside a composite subscript: a bare thing variable or
    /// constant denotes its singleton.
    fn composite_domain(&mut self) -> Result<TNode, ParseError> {
        let t = self.term()?;
        Ok(match &t.ast {
            Term::ThingVar(_) | Term::ThingConst(_) => {
                let span = t.spans.span;
                TNode { ast: Term::succ(t.ast.clone()), spans: synth(span, vec![t.spans]) }
            }
            _ => t,
        })
    }

    fn primary_term(&mut self) -> Result<TNode, ParseError> {
        let sp = self.span();
        match self.peek().clone() {
            Tok::Int(0) => {
                self.bump();
                Ok(TNode { ast: Term::EmptySet, spans: SpanTree::leaf(sp) })
            }
            Tok::Int(n) => Err(ParseError {
                span: sp,
                expected: vec!["a term".into()],
                found: format!("number `{n}`"),
            }),
            Tok::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "w" => return Ok(TNode { ast: Term::Omega, spans: SpanTree::leaf(sp) }),
                    "id0" => {
                        return Ok(TNode { ast: Term::InactiveFn, spans: SpanTree::leaf(sp) })
                    }
                    "succ" => {
                        self.expect(Tok::LParen, "`(`")?;
                        let inner = self.term()?;
                        self.expect(Tok::RParen, "`)`")?;
                        return Ok(TNode {
                            ast: Term::succ(inner.ast),
                            spans: synth(sp, vec![inner.spans]),
                        });
                    }
                    _ => {}
                }
                if RESERVED.contains(&name.as_str()) {
                    return Err(ParseError {
                        span: sp,
                        expected: vec!["a term".into()],
                        found: format!("reserved word `{name}`"),
                    });
                }
                if *self.peek() == Tok::Underscore && *self.peek2() == Tok::LBrace {
                    // Function composite name_{domain}.
                    self.bump();
                    self.bump();
                    let domain = self.composite_domain()?;
                    self.expect(Tok::RBrace, "`}`")?;
                    let (_, is_const) = classify(&name);
                    let graph =
                        if is_const { Term::SetConst(name) } else { Term::GraphVar(name) };
                    return Ok(TNode {
                        ast: Term::composite(graph, domain.ast),
                        spans: synth(sp, vec![synth_deep(sp), domain.spans]),
                    });
                }
                let kind = self.lookup_kind(&name);
                let (_, is_const) = classify(&name);
                let ast = match (kind, is_const) {
                    (VarKind::Set, false) => Term::SetVar(name),
                    (VarKind::Set, true) => Term::SetConst(name),
                    (VarKind::Thing, false) => Term::ThingVar(name),
                    (VarKind::Thing, true) => Term::ThingConst(name),
                };
                Ok(TNode { ast, spans: SpanTree::leaf(sp) })
            }
            Tok::LParen => {
                self.bump();
                let a = self.term()?;
                self.expect(Tok::Comma, "`,`")?;
                let b = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(TNode {
                    ast: Term::pair(a.ast, b.ast),
                    spans: synth(sp, vec![a.spans, b.spans]),
                })
            }
            Tok::LAngle => {
                self.bump();
                let a = self.term()?;
                self.expect(Tok::Comma, "`,`")?;
                let b = self.term()?;
                self.expect(Tok::RAngle, "`>`")?;
                Ok(TNode {
                    ast: Term::pair(a.ast, b.ast),
                    spans: synth(sp, vec![a.spans, b.spans]),
                })
            }
            Tok::LBrace => {
                self.bump();
                let mut items = Vec::new();
                let mut spans = Vec::new();
                if *self.peek() != Tok::RBrace {
                    loop {
                        let t = self.term()?;
                        items.push(t.ast);
                        spans.push(t.spans);
                        if *self.peek() == Tok::Comma {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                }
                self.expect(Tok::RBrace, "`}`")?;
                let (ast, spans) = if items.is_empty() {
                    (Term::EmptySet, vec![])
                } else {
                    (Term::SetLiteral(items), spans)
                };
                Ok(TNode { ast, spans: synth(sp, spans) })
            }
            Tok::LBracket => {
                self.bump();
                let mut rows: Vec<Vec<TNode>> = vec![Vec::new()];
                loop {
                    match self.peek() {
                        Tok::RBracket => {
                            self.bump();
                            break;
                        }
                        Tok::Semi => {
                            self.bump();
                            rows.push(Vec::new());
                        }
                        Tok::Eof => return Err(self.err(&["`]`"])),
                        _ => {
                            let t = self.term()?;
                            rows.last_mut().unwrap().push(t);
                        }
                    }
                }
                let cols = rows[0].len();
                if cols == 0 || rows.iter().any(|r| r.len() != cols) {
                    return Err(ParseError {
                        span: sp,
                        expected: vec!["a rectangular, non-empty matrix".into()],
                        found: "ragged or empty matrix".into(),
                    });
                }
                let nrows = rows.len();
                let mut entries = Vec::new();
                let mut spans = Vec::new();
                for row in rows {
                    for t in row {
                        entries.push(t.ast);
                        spans.push(t.spans);
                    }
                }
                let (ast, spans) = if nrows == 1
                    && cols == 2
                    && entries.iter().all(|e| *e == Term::EmptySet)
                {
                    (Term::EmptyMatrix, vec![])
                } else {
                    (Term::Matrix { rows: nrows, cols, entries }, spans)
                };
                Ok(TNode { ast, spans: synth(sp, spans) })
            }
            _ => Err(self.err(&["a term"])),
        }
    }
}

fn binary(l: FNode, r: FNode, mk: fn(Formula, Formula) -> Formula) -> FNode {
    let span = l.spans.span;
    FNode { ast: mk(l.ast, r.ast), spans: SpanTree { span, children: vec![l.spans, r.spans] } }
}

fn atom2(span: SourceSpan, ast: Formula, a: SpanTree, b: SpanTree) -> FNode {
    FNode { ast, spans: SpanTree { span, children: vec![a, b] } }
}

/// Span tree for synthesized (desugared) nodes: everything points at the
/// sugar's source region.
fn synth(span: SourceSpan, children: Vec<SpanTree>) -> SpanTree {
    SpanTree { span, children }
}

fn synth_deep(span: SourceSpan) -> SpanTree {
    SpanTree { span, children: vec![] }
}

fn fresh_against(f: &Formula, base: &str) -> Name {
    let used: std::collections::BTreeSet<Name> =
        crate::syntax::free_variables(f).into_iter().map(|(n, _)| n).collect();
    for i in 1.. {
        let cand = format!("{base}{i}");
        if !used.contains(&cand) {
            return cand;
        }
    }
    unreachable!()
}

fn fresh_against_terms(ts: &[&Term]) -> Name {
    let mut used = std::collections::BTreeSet::new();
    for t in ts {
        collect_names(t, &mut used);
    }
    for i in 0.. {
        let cand = if i == 0 { "eta0".to_string() } else { format!("eta0{i}") };
        if !used.contains(&cand) {
            return cand;
        }
    }
    unreachable!()
}

fn collect_names(t: &Term, out: &mut std::collections::BTreeSet<Name>) {
    match t {
        Term::SetVar(n)
        | Term::ThingVar(n)
        | Term::GraphVar(n)
        | Term::SetConst(n)
        | Term::ThingConst(n) => {
            out.insert(n.clone());
        }
        _ => {}
    }
    for c in t.children() {
        collect_names(c, out);
    }
}
