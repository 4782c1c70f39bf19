use std::collections::BTreeMap;
use std::fmt;

/// Nonnegative symbolic quantities as they occur in derivative-bound types:
/// constants, named parameters, variables, |.|, sums, products, real powers
/// and minima. Quotients and square roots are powers.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    /// A named constant such as delta or X.
    Param(String, f64),
    Var(usize),
    Abs(Box<Expr>),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Pow(Box<Expr>, f64),
    Min(Vec<Expr>),
}

impl Expr {
    pub fn c(v: f64) -> Expr {
        Expr::Const(v)
    }

    pub fn param(name: &str, v: f64) -> Expr {
        Expr::Param(name.to_string(), v)
    }

    pub fn var(i: usize) -> Expr {
        Expr::Var(i)
    }

    pub fn zero() -> Expr {
        Expr::Const(0.0)
    }

    pub fn one() -> Expr {
        Expr::Const(1.0)
    }

    pub fn abs(self) -> Expr {
        Expr::Abs(Box::new(self))
    }

    pub fn sqrt(self) -> Expr {
        Expr::Pow(Box::new(self), 0.5)
    }

    pub fn pow(self, e: f64) -> Expr {
        Expr::Pow(Box::new(self), e)
    }

    pub fn recip(self) -> Expr {
        self.pow(-1.0)
    }

    pub fn min(items: Vec<Expr>) -> Expr {
        Expr::Min(items)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.simplify(), Expr::Const(c) if c == 0.0)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::Param(_, v) => *v,
            Expr::Var(i) => x[*i],
            Expr::Abs(a) => a.eval(x).abs(),
            Expr::Add(v) => v.iter().map(|e| e.eval(x)).sum(),
            Expr::Mul(v) => v.iter().map(|e| e.eval(x)).product(),
            Expr::Pow(b, e) => b.eval(x).powf(*e),
            Expr::Min(v) => v.iter().map(|e| e.eval(x)).fold(f64::INFINITY, f64::min),
        }
    }

    /// Replaces Var(i) by subs[i].
    pub fn substitute(&self, subs: &[Expr]) -> Expr {
        match self {
            Expr::Var(i) => subs[*i].clone(),
            Expr::Const(_) | Expr::Param(..) => self.clone(),
            Expr::Abs(a) => Expr::Abs(Box::new(a.substitute(subs))),
            Expr::Add(v) => Expr::Add(v.iter().map(|e| e.substitute(subs)).collect()),
            Expr::Mul(v) => Expr::Mul(v.iter().map(|e| e.substitute(subs)).collect()),
            Expr::Pow(b, e) => Expr::Pow(Box::new(b.substitute(subs)), *e),
            Expr::Min(v) => Expr::Min(v.iter().map(|e| e.substitute(subs)).collect()),
        }
    }

    /// Canonical form: flattened, constants folded, like factors merged into
    /// powers, operands sorted. Two expressions equal up to commutativity and
    /// associativity have the same canonical form.
    pub fn simplify(&self) -> Expr {
        match self {
            Expr::Const(_) | Expr::Param(..) | Expr::Var(_) => self.clone(),
            Expr::Abs(a) => match a.simplify() {
                Expr::Const(c) => Expr::Const(c.abs()),
                Expr::Param(n, v) if v >= 0.0 => Expr::Param(n, v),
                inner @ Expr::Abs(_) => inner,
                Expr::Pow(b, e) if matches!(*b, Expr::Abs(_)) => Expr::Pow(b, e),
                Expr::Mul(v) => Expr::Mul(v.into_iter().map(|f| f.abs()).collect()).simplify(),
                inner => Expr::Abs(Box::new(inner)),
            },
            Expr::Add(v) => simplify_add(v),
            Expr::Mul(v) => simplify_mul(v),
            Expr::Pow(b, e) => simplify_pow(b.simplify(), *e),
            Expr::Min(v) => {
                let mut items: Vec<Expr> = Vec::new();
                for e in v {
                    match e.simplify() {
                        Expr::Min(inner) => items.extend(inner),
                        s => items.push(s),
                    }
                }
                let consts: Vec<f64> = items
                    .iter()
                    .filter_map(|e| {
                        if let Expr::Const(c) = e {
                            Some(*c)
                        } else {
                            None
                        }
                    })
                    .collect();
                let mut rest: Vec<Expr> = items
                    .into_iter()
                    .filter(|e| !matches!(e, Expr::Const(_)))
                    .collect();
                if !consts.is_empty() {
                    rest.push(Expr::Const(
                        consts.into_iter().fold(f64::INFINITY, f64::min),
                    ));
                }
                sort_dedup(&mut rest);
                if rest.len() == 1 {
                    rest.pop().unwrap()
                } else {
                    Expr::Min(rest)
                }
            }
        }
    }

    pub fn key(&self) -> String {
        self.render(&[])
    }

    /// Display with variable names; missing names print as x0, x1, ...
    pub fn render(&self, names: &[String]) -> String {
        let name = |i: usize| names.get(i).cloned().unwrap_or_else(|| format!("x{i}"));
        match self {
            Expr::Const(c) => fmt_num(*c),
            Expr::Param(n, _) => n.clone(),
            Expr::Var(i) => name(*i),
            Expr::Abs(a) => format!("|{}|", a.render(names)),
            Expr::Add(v) => format!(
                "({})",
                v.iter()
                    .map(|e| e.render(names))
                    .collect::<Vec<_>>()
                    .join(" + ")
            ),
            Expr::Mul(v) => v
                .iter()
                .map(|e| e.render(names))
                .collect::<Vec<_>>()
                .join("*"),
            Expr::Pow(b, e) => {
                let base = b.render(names);
                if *e == 0.5 {
                    format!("sqrt({base})")
                } else if *e == -1.0 {
                    format!("1/{base}")
                } else {
                    format!("{base}^{}", fmt_num(*e))
                }
            }
            Expr::Min(v) => format!(
                "min{{{}}}",
                v.iter()
                    .map(|e| e.render(names))
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&[]))
    }
}

impl std::ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::Add(vec![self, rhs])
    }
}

impl std::ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::Mul(vec![self, rhs])
    }
}

impl std::ops::Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        Expr::Mul(vec![self, rhs.recip()])
    }
}

fn fmt_num(c: f64) -> String {
    if c == c.trunc() && c.abs() < 1e15 {
        format!("{}", c as i64)
    } else {
        format!("{c}")
    }
}

fn sort_dedup(v: &mut Vec<Expr>) {
    v.sort_by_key(|e| e.key());
    v.dedup_by(|a, b| a.key() == b.key());
}

fn simplify_add(v: &[Expr]) -> Expr {
    let mut terms: Vec<Expr> = Vec::new();
    for e in v {
        match e.simplify() {
            Expr::Add(inner) => terms.extend(inner),
            s => terms.push(s),
        }
    }
    let mut constant = 0.0;
    // like terms: coefficient * monomial
    let mut grouped: BTreeMap<String, (f64, Expr)> = BTreeMap::new();
    for t in terms {
        match t {
            Expr::Const(c) => constant += c,
            other => {
                let (coef, mono) = split_coefficient(other);
                let entry = grouped.entry(mono.key()).or_insert((0.0, mono));
                entry.0 += coef;
            }
        }
    }
    let mut out: Vec<Expr> = grouped
        .into_values()
        .filter(|(c, _)| *c != 0.0)
        .map(|(c, m)| {
            if c == 1.0 {
                m
            } else {
                simplify_mul(&[Expr::Const(c), m])
            }
        })
        .collect();
    if constant != 0.0 {
        out.push(Expr::Const(constant));
    }
    out.sort_by_key(|e| e.key());
    match out.len() {
        0 => Expr::zero(),
        1 => out.pop().unwrap(),
        _ => Expr::Add(out),
    }
}

fn split_coefficient(e: Expr) -> (f64, Expr) {
    if let Expr::Mul(items) = &e {
        if let Some(Expr::Const(c)) = items.first() {
            let rest: Vec<Expr> = items[1..].to_vec();
            let mono = if rest.len() == 1 {
                rest[0].clone()
            } else {
                Expr::Mul(rest)
            };
            return (*c, mono);
        }
    }
    (1.0, e)
}

fn simplify_mul(v: &[Expr]) -> Expr {
    let mut factors: Vec<Expr> = Vec::new();
    for e in v {
        match e.simplify() {
            Expr::Mul(inner) => factors.extend(inner),
            s => factors.push(s),
        }
    }
    let mut coef = 1.0;
    let mut powers: BTreeMap<String, (Expr, f64)> = BTreeMap::new();
    for f in factors {
        match f {
            Expr::Const(c) => coef *= c,
            Expr::Pow(b, e) => {
                let entry = powers.entry(b.key()).or_insert((*b, 0.0));
                entry.1 += e;
            }
            other => {
                let entry = powers.entry(other.key()).or_insert((other, 0.0));
                entry.1 += 1.0;
            }
        }
    }
    if coef == 0.0 {
        return Expr::zero();
    }
    let mut out: Vec<Expr> = powers
        .into_values()
        .filter(|(_, e)| *e != 0.0)
        .map(|(b, e)| {
            if e == 1.0 {
                b
            } else {
                Expr::Pow(Box::new(b), e)
            }
        })
        .collect();
    out.sort_by_key(|e| e.key());
    if coef != 1.0 || out.is_empty() {
        out.insert(0, Expr::Const(coef));
    }
    if out.len() == 1 {
        out.pop().unwrap()
    } else {
        Expr::Mul(out)
    }
}

fn simplify_pow(b: Expr, e: f64) -> Expr {
    if e == 0.0 {
        return Expr::one();
    }
    if e == 1.0 {
        return b;
    }
    match b {
        Expr::Const(c) => Expr::Const(c.powf(e)),
        Expr::Pow(inner, e2) => simplify_pow(*inner, e * e2),
        Expr::Mul(items) => simplify_mul(
            &items
                .into_iter()
                .map(|f| simplify_pow(f, e))
                .collect::<Vec<_>>(),
        ),
        other => Expr::Pow(Box::new(other), e),
    }
}
