//! Recursive-descent parser for expressions, `.pde` systems and `.gen`
//! generator files.
//!
//! Precedence: `^` binds tighter than unary minus, which binds tighter than
//! `*`/`/`, which bind tighter than binary `+`/`-`. Implicit multiplication
//! is not allowed.

use num_rational::BigRational;

use crate::context::{Ctx, IndexConvention};
use crate::error::DiffAlgError;
use crate::multiindex::MultiIndex;
use crate::poly::{DiffPoly, JetVar, SubstitutionRule};
use crate::symmetry::Generator;

use super::lexer::{tokenize, Spanned, Tok};
use super::{Equation, ParseError, SolvedForm, SystemSpec};

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: tokenize(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Spanned {
        let s = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        s
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let s = self.peek();
        Err(ParseError::new(s.line, s.col, msg))
    }

    fn expect(&mut self, tok: Tok) -> Result<Spanned, ParseError> {
        if self.peek().tok == tok {
            Ok(self.next())
        } else {
            self.err(format!("expected `{tok}`, found `{}`", self.peek().tok))
        }
    }

    fn expect_ident(&mut self) -> Result<(String, u32, Spanned), ParseError> {
        match self.peek().tok.clone() {
            Tok::Ident { name, primes } => {
                let s = self.next();
                Ok((name, primes, s))
            }
            other => self.err(format!("expected a name, found `{other}`")),
        }
    }

    fn expect_int(&mut self) -> Result<u64, ParseError> {
        match self.peek().tok {
            Tok::Int(n) => {
                self.next();
                Ok(n)
            }
            _ => self.err(format!(
                "expected an integer, found `{}`",
                self.peek().tok
            )),
        }
    }

    fn at_eof(&self) -> bool {
        self.peek().tok == Tok::Eof
    }

    // expr := term (('+'|'-') term)*
    fn expr(&mut self, ctx: &Ctx) -> Result<DiffPoly, ParseError> {
        let mut acc = self.term(ctx)?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.next();
                    acc = acc.add(&self.term(ctx)?);
                }
                Tok::Minus => {
                    self.next();
                    acc = acc.sub(&self.term(ctx)?);
                }
                _ => return Ok(acc),
            }
        }
    }

    // term := factor (('*'|'/') factor)*
    fn term(&mut self, ctx: &Ctx) -> Result<DiffPoly, ParseError> {
        let mut acc = self.factor(ctx)?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.next();
                    acc = acc.mul(&self.factor(ctx)?);
                }
                Tok::Slash => {
                    let s = self.next();
                    let rhs = self.factor(ctx)?;
                    acc = acc
                        .div(&rhs)
                        .map_err(|e| ParseError::new(s.line, s.col, e.to_string()))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    // factor := '-' factor | primary ('^' int)?
    fn factor(&mut self, ctx: &Ctx) -> Result<DiffPoly, ParseError> {
        if self.peek().tok == Tok::Minus {
            self.next();
            return Ok(self.factor(ctx)?.neg());
        }
        let base = self.primary(ctx)?;
        if self.peek().tok == Tok::Caret {
            self.next();
            let exp = self.expect_int()?;
            if exp > u32::MAX as u64 {
                return self.err("exponent too large");
            }
            return Ok(base.pow(exp as u32));
        }
        Ok(base)
    }

    // primary := number | '(' expr ')' | symbol | 'D' '(' name ',' indep ',' int ')'
    fn primary(&mut self, ctx: &Ctx) -> Result<DiffPoly, ParseError> {
        match self.peek().tok.clone() {
            Tok::Int(n) => {
                self.next();
                Ok(DiffPoly::constant(
                    ctx,
                    BigRational::from_integer(n.into()),
                ))
            }
            Tok::LParen => {
                self.next();
                let inner = self.expr(ctx)?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::Ident { name, .. } if name == "D" => {
                self.next();
                self.expect(Tok::LParen)?;
                let (target, primes, s) = self.expect_ident()?;
                if primes > 0 {
                    return Err(ParseError::new(
                        s.line,
                        s.col,
                        "primes are not allowed inside D(...)",
                    ));
                }
                self.expect(Tok::Comma)?;
                let (dir, dprimes, ds) = self.expect_ident()?;
                if dprimes > 0 {
                    return Err(ParseError::new(ds.line, ds.col, "bad derivative direction"));
                }
                let dir_idx = ctx.indep_index(&dir).ok_or_else(|| {
                    ParseError::new(ds.line, ds.col, format!("`{dir}` is not an independent variable"))
                })?;
                self.expect(Tok::Comma)?;
                let count = self.expect_int()?;
                self.expect(Tok::RParen)?;
                self.resolve_d(ctx, &target, dir_idx, count, &s)
            }
            Tok::Ident { .. } => {
                let (name, primes, s) = self.expect_ident()?;
                self.resolve_symbol(ctx, &name, primes, &s)
            }
            other => self.err(format!("expected an expression, found `{other}`")),
        }
    }

    fn resolve_d(
        &self,
        ctx: &Ctx,
        target: &str,
        dir: usize,
        count: u64,
        at: &Spanned,
    ) -> Result<DiffPoly, ParseError> {
        if count > u8::MAX as u64 {
            return Err(ParseError::new(at.line, at.col, "derivative order too large"));
        }
        if let Some(fidx) = ctx.func_index(target) {
            if count > 0 && ctx.func(fidx).arg != dir {
                // Derivative of F(arg) in a direction it does not depend on.
                return Ok(DiffPoly::zero(ctx));
            }
            return Ok(DiffPoly::func(ctx, fidx, count as u32));
        }
        if let Some(dep) = ctx.dep_index(target) {
            let mut counts = vec![0u8; ctx.n_indep()];
            counts[dir] = count as u8;
            return DiffPoly::jet(ctx, dep, MultiIndex::new(counts))
                .map_err(|e| ParseError::new(at.line, at.col, e.to_string()));
        }
        Err(ParseError::new(
            at.line,
            at.col,
            format!("undeclared symbol `{target}`"),
        ))
    }

    fn resolve_symbol(
        &self,
        ctx: &Ctx,
        name: &str,
        primes: u32,
        at: &Spanned,
    ) -> Result<DiffPoly, ParseError> {
        if let Some((base, suffix)) = name.split_once('_') {
            if primes > 0 {
                return Err(ParseError::new(
                    at.line,
                    at.col,
                    "primes cannot combine with a derivative suffix",
                ));
            }
            let dep = ctx.dep_index(base).ok_or_else(|| {
                ParseError::new(
                    at.line,
                    at.col,
                    format!("undeclared dependent variable `{base}`"),
                )
            })?;
            let mut counts = vec![0u8; ctx.n_indep()];
            for c in suffix.chars() {
                let idx = ctx
                    .indep_names()
                    .iter()
                    .position(|n| n.len() == 1 && n.chars().next().unwrap() == c)
                    .ok_or_else(|| {
                        ParseError::new(
                            at.line,
                            at.col,
                            format!("`{c}` in `{name}` is not an independent variable"),
                        )
                    })?;
                if counts[idx] == u8::MAX {
                    return Err(ParseError::new(at.line, at.col, "derivative order too large"));
                }
                counts[idx] += 1;
            }
            return DiffPoly::jet(ctx, dep, MultiIndex::new(counts))
                .map_err(|e| ParseError::new(at.line, at.col, e.to_string()));
        }
        if let Some(fidx) = ctx.func_index(name) {
            return Ok(DiffPoly::func(ctx, fidx, primes));
        }
        if primes > 0 {
            return Err(ParseError::new(
                at.line,
                at.col,
                format!("`{name}` is not an arbitrary function; primes are invalid here"),
            ));
        }
        if let Some(i) = ctx.indep_index(name) {
            return Ok(DiffPoly::coord(ctx, i));
        }
        if let Some(dep) = ctx.dep_index(name) {
            return DiffPoly::jet(ctx, dep, MultiIndex::zero(ctx.n_indep()))
                .map_err(|e| ParseError::new(at.line, at.col, e.to_string()));
        }
        Err(ParseError::new(
            at.line,
            at.col,
            format!("undeclared symbol `{name}`"),
        ))
    }

    /// A jet variable reference (for `solve` hints): `u`, `u_t`, `w_x`...
    fn jet_ref(&mut self, ctx: &Ctx) -> Result<JetVar, ParseError> {
        let (name, primes, s) = self.expect_ident()?;
        if primes > 0 {
            return Err(ParseError::new(s.line, s.col, "expected a jet variable"));
        }
        let poly = self.resolve_symbol(ctx, &name, 0, &s)?;
        let vars = poly.jet_vars();
        if vars.len() == 1 && poly.num_terms() == 1 && poly.terms()[0].mono.jet_degree() == 1 {
            Ok(vars[0].clone())
        } else {
            Err(ParseError::new(s.line, s.col, "expected a jet variable"))
        }
    }
}

/// Parse a single expression in an existing convention.
pub fn parse_expression(text: &str, ctx: &Ctx) -> Result<DiffPoly, ParseError> {
    let mut p = Parser::new(text)?;
    let e = p.expr(ctx)?;
    if !p.at_eof() {
        return p.err(format!("unexpected trailing `{}`", p.peek().tok));
    }
    Ok(e)
}

fn solved_form(
    expr: &DiffPoly,
    var: JetVar,
    line: u32,
    col: u32,
) -> Result<SolvedForm, ParseError> {
    let coeff = expr.partial_jet_sym(var.dep, &var.multi);
    let sign = match coeff.as_constant() {
        Some(c) if c == BigRational::from_integer(1.into()) => 1i8,
        Some(c) if c == BigRational::from_integer((-1).into()) => -1i8,
        _ => {
            return Err(ParseError::new(
                line,
                col,
                "solved derivative must appear linearly with coefficient +1 or -1",
            ))
        }
    };
    // F = sign * (var - rhs)  =>  rhs = var - sign * F.
    let var_poly = DiffPoly::jet(expr.ctx(), var.dep, var.multi.clone())
        .map_err(|e| ParseError::new(line, col, e.to_string()))?;
    let rhs = if sign == 1 {
        var_poly.sub(expr)
    } else {
        var_poly.add(expr)
    };
    if rhs.jet_vars().contains(&var) {
        return Err(ParseError::new(
            line,
            col,
            "solved derivative must appear linearly with coefficient +1 or -1",
        ));
    }
    Ok(SolvedForm { var, rhs, sign })
}

/// Parse a `.pde` system file:
///
/// ```text
/// file := decl* eq+
/// decl := "indep" names ";" | "dep" names ";" | "func" name "(" name ")" ";"
/// eq   := "eq" expr "=" "0" ["solve" jetvar] ";"
/// ```
///
/// Names are comma-separated. When no `indep` declaration is present the
/// default `(t, x, y)` convention is used.
pub fn parse_system(text: &str) -> Result<SystemSpec, ParseError> {
    let mut p = Parser::new(text)?;
    let mut indep: Vec<String> = Vec::new();
    let mut dep: Vec<String> = Vec::new();
    let mut funcs: Vec<(String, String, Spanned)> = Vec::new();

    // Declarations.
    loop {
        match p.peek().tok.clone() {
            Tok::Ident { name, primes: 0 } if name == "indep" || name == "dep" => {
                p.next();
                loop {
                    let (n, primes, s) = p.expect_ident()?;
                    if primes > 0 {
                        return Err(ParseError::new(s.line, s.col, "bad name"));
                    }
                    if name == "indep" {
                        indep.push(n);
                    } else {
                        dep.push(n);
                    }
                    match p.peek().tok {
                        Tok::Comma => {
                            p.next();
                        }
                        Tok::Semi => {
                            p.next();
                            break;
                        }
                        _ => return p.err("expected `,` or `;` in declaration"),
                    }
                }
            }
            Tok::Ident { name, primes: 0 } if name == "func" => {
                p.next();
                let (fname, _, fs) = p.expect_ident()?;
                p.expect(Tok::LParen)?;
                let (arg, _, _) = p.expect_ident()?;
                p.expect(Tok::RParen)?;
                p.expect(Tok::Semi)?;
                funcs.push((fname, arg, fs));
            }
            _ => break,
        }
    }

    if indep.is_empty() {
        indep = vec!["t".into(), "x".into(), "y".into()];
    }
    if dep.is_empty() {
        return p.err("system declares no dependent variables");
    }
    let indep_refs: Vec<&str> = indep.iter().map(|s| s.as_str()).collect();
    let dep_refs: Vec<&str> = dep.iter().map(|s| s.as_str()).collect();
    let mut conv = IndexConvention::new(&indep_refs, &dep_refs)
        .map_err(|e| ParseError::new(1, 1, e.to_string()))?;
    for (fname, arg, fs) in funcs {
        conv = conv
            .with_func(&fname, &arg)
            .map_err(|e| ParseError::new(fs.line, fs.col, e.to_string()))?;
    }
    let ctx = conv.into_ctx();

    // Equations.
    let mut equations = Vec::new();
    while !p.at_eof() {
        let kw = p.expect_ident()?;
        if kw.0 != "eq" {
            return Err(ParseError::new(
                kw.2.line,
                kw.2.col,
                format!("expected `eq`, found `{}`", kw.0),
            ));
        }
        let expr = p.expr(&ctx)?;
        p.expect(Tok::Eq)?;
        let zero = p.expect_int()?;
        if zero != 0 {
            return p.err("equations must be written `expr = 0`");
        }
        let mut solved = None;
        if let Tok::Ident { name, primes: 0 } = p.peek().tok.clone() {
            if name == "solve" {
                let s = p.next();
                let var = p.jet_ref(&ctx)?;
                solved = Some(solved_form(&expr, var, s.line, s.col)?);
            }
        }
        p.expect(Tok::Semi)?;
        equations.push(Equation { expr, solved });
    }
    if equations.is_empty() {
        return p.err("system declares no equations");
    }
    Ok(SystemSpec { ctx, equations })
}

/// Parse a `.gen` generator file against a system's convention:
///
/// ```text
/// line := "func" name "(" name ")" ";" | "xi" indep "=" expr ";" | "eta" dep "=" expr ";"
/// ```
///
/// `func` lines extend the convention; the returned generator lives in the
/// (possibly extended) convention, which is also returned.
pub fn parse_generator(
    text: &str,
    ctx: &Ctx,
    name: &str,
) -> Result<(Generator, Ctx), ParseError> {
    let mut p = Parser::new(text)?;
    let mut conv = (**ctx).clone();

    // Leading func declarations.
    loop {
        match p.peek().tok.clone() {
            Tok::Ident { name, primes: 0 } if name == "func" => {
                let fs = p.next();
                let (fname, _, _) = p.expect_ident()?;
                p.expect(Tok::LParen)?;
                let (arg, _, _) = p.expect_ident()?;
                p.expect(Tok::RParen)?;
                p.expect(Tok::Semi)?;
                conv = conv
                    .with_func(&fname, &arg)
                    .map_err(|e| ParseError::new(fs.line, fs.col, e.to_string()))?;
            }
            _ => break,
        }
    }
    let ctx = conv.into_ctx();

    let mut xi = vec![DiffPoly::zero(&ctx); ctx.n_indep()];
    let mut eta = vec![DiffPoly::zero(&ctx); ctx.n_dep()];
    while !p.at_eof() {
        let (kw, _, ks) = p.expect_ident()?;
        let (vname, _, vs) = p.expect_ident()?;
        p.expect(Tok::Eq)?;
        let expr = p.expr(&ctx)?;
        if expr.jet_order() > 0 {
            return Err(ParseError::new(
                vs.line,
                vs.col,
                "generator coefficients must have jet order 0 (point symmetry)",
            ));
        }
        p.expect(Tok::Semi)?;
        match kw.as_str() {
            "xi" => {
                let i = ctx.indep_index(&vname).ok_or_else(|| {
                    ParseError::new(
                        vs.line,
                        vs.col,
                        format!("`{vname}` is not an independent variable"),
                    )
                })?;
                xi[i] = expr;
            }
            "eta" => {
                let i = ctx.dep_index(&vname).ok_or_else(|| {
                    ParseError::new(
                        vs.line,
                        vs.col,
                        format!("`{vname}` is not a dependent variable"),
                    )
                })?;
                eta[i] = expr;
            }
            other => {
                return Err(ParseError::new(
                    ks.line,
                    ks.col,
                    format!("expected `xi`, `eta` or `func`, found `{other}`"),
                ))
            }
        }
    }
    let gen = Generator::new(name, xi, eta)
        .map_err(|e| ParseError::new(1, 1, e.to_string()))?;
    Ok((gen, ctx))
}

/// Parse a comma-separated substitution list such as `v=u, z=w`.
pub fn parse_substitution(text: &str, ctx: &Ctx) -> Result<SubstitutionRule, ParseError> {
    let mut p = Parser::new(text)?;
    let mut pairs = Vec::new();
    loop {
        let (name, _, s) = p.expect_ident()?;
        let dep = ctx.dep_index(&name).ok_or_else(|| {
            ParseError::new(
                s.line,
                s.col,
                format!("`{name}` is not a dependent variable"),
            )
        })?;
        p.expect(Tok::Eq)?;
        let expr = p.expr(ctx)?;
        pairs.push((dep, expr));
        match p.peek().tok {
            Tok::Comma => {
                p.next();
            }
            Tok::Eof => break,
            _ => return p.err("expected `,` between substitutions"),
        }
    }
    SubstitutionRule::new(pairs).map_err(|e: DiffAlgError| ParseError::new(1, 1, e.to_string()))
}

/// Parse a golden-expectation file: a sequence of `name = expr;` entries.
pub fn parse_named_exprs(
    text: &str,
    ctx: &Ctx,
) -> Result<Vec<(String, DiffPoly)>, ParseError> {
    let mut p = Parser::new(text)?;
    let mut out = Vec::new();
    while !p.at_eof() {
        let (name, _, _) = p.expect_ident()?;
        p.expect(Tok::Eq)?;
        let expr = p.expr(ctx)?;
        p.expect(Tok::Semi)?;
        out.push((name, expr));
    }
    Ok(out)
}
