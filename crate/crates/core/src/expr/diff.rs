use super::{pow_checked, Expr, Func};

/// Exact derivative with respect to `t`, simplified.
pub fn diff(e: &Expr) -> Expr {
    simplify(&derive(e))
}

fn derive(e: &Expr) -> Expr {
    use Expr::*;
    match e {
        Const(_) => Const(0.0),
        Var => Const(1.0),
        Add(a, b) => derive(a) + derive(b),
        Sub(a, b) => derive(a) - derive(b),
        Mul(a, b) => derive(a) * (**b).clone() + (**a).clone() * derive(b),
        // quotients become negative powers so products can merge them
        Div(a, b) => {
            let b = (**b).clone();
            derive(a) * b.clone().powf(-1.0) - (**a).clone() * derive(&b) * b.powf(-2.0)
        }
        Pow(base, c) => Const(*c) * (**base).clone().powf(c - 1.0) * derive(base),
        Neg(a) => -derive(a),
        Call(func, a) => {
            let inner = derive(a);
            let arg = (**a).clone();
            match func {
                Func::Exp => arg.exp() * inner,
                Func::Ln => inner * arg.powf(-1.0),
                Func::Sin => arg.cos() * inner,
                Func::Cos => -(arg.sin() * inner),
                Func::Sqrt => Const(0.5) * inner * arg.sqrt().powf(-1.0),
            }
        }
    }
}

const MAX_PASSES: usize = 64;

/// Local rewriting to a fixed point: identity elements, annihilators,
/// trivial powers, constant folding, gathering constant factors to the left
/// and merging powers of a common base. Idempotent.
pub fn simplify(e: &Expr) -> Expr {
    let mut current = e.clone();
    for _ in 0..MAX_PASSES {
        let next = pass(&current);
        if next == current {
            break;
        }
        current = next;
    }
    current
}

fn finite(x: f64) -> Option<Expr> {
    x.is_finite().then_some(Expr::Const(x))
}

fn is_integer(x: f64) -> bool {
    x.fract() == 0.0
}

/// Split `x` into (base, exponent) for power merging.
fn as_power(e: &Expr) -> (&Expr, f64) {
    match e {
        Expr::Pow(base, c) => (base, *c),
        other => (other, 1.0),
    }
}

fn pass(e: &Expr) -> Expr {
    use Expr::*;
    match e {
        Const(_) | Var => e.clone(),
        Add(a, b) => rewrite_add(pass(a), pass(b)),
        Sub(a, b) => rewrite_sub(pass(a), pass(b)),
        Mul(a, b) => rewrite_mul(pass(a), pass(b)),
        Div(a, b) => rewrite_div(pass(a), pass(b)),
        Pow(a, c) => rewrite_pow(pass(a), *c),
        Neg(a) => match pass(a) {
            Const(c) => Const(-c),
            Neg(inner) => *inner,
            other => -other,
        },
        Call(func, a) => {
            let arg = pass(a);
            if let Const(c) = arg {
                if let Some(folded) = func.apply(c).ok().and_then(finite) {
                    return folded;
                }
            }
            Expr::call(*func, arg)
        }
    }
}

fn rewrite_add(a: Expr, b: Expr) -> Expr {
    use Expr::*;
    match (a, b) {
        (Const(x), Const(y)) => Const(x + y),
        (Const(0.0), other) | (other, Const(0.0)) => other,
        (a, Neg(b)) => Sub(Box::new(a), b),
        (a, b) => a + b,
    }
}

fn rewrite_sub(a: Expr, b: Expr) -> Expr {
    use Expr::*;
    match (a, b) {
        (Const(x), Const(y)) => Const(x - y),
        (other, Const(0.0)) => other,
        (Const(0.0), other) => -other,
        (a, Neg(b)) => Add(Box::new(a), b),
        (a, b) => a - b,
    }
}

fn rewrite_mul(a: Expr, b: Expr) -> Expr {
    use Expr::*;
    match (&a, &b) {
        (Const(x), Const(y)) => return Const(x * y),
        (Const(z), _) | (_, Const(z)) if *z == 0.0 => return Const(0.0),
        _ => {}
    }
    // a monomial c*t^k times a sum is distributed so the powers of t merge
    match (a, b) {
        (m, Add(x, y)) | (Add(x, y), m) if is_monomial(&m) => {
            rewrite_add(rewrite_mul(m.clone(), *x), rewrite_mul(m, *y))
        }
        (m, Sub(x, y)) | (Sub(x, y), m) if is_monomial(&m) => {
            rewrite_sub(rewrite_mul(m.clone(), *x), rewrite_mul(m, *y))
        }
        (a, b) => {
            let mut product = Product::default();
            product.collect(a);
            product.collect(b);
            product.rebuild()
        }
    }
}

fn is_monomial(e: &Expr) -> bool {
    match e {
        Expr::Var => true,
        Expr::Pow(base, _) => **base == Expr::Var,
        Expr::Mul(c, rest) => matches!(**c, Expr::Const(_)) && is_monomial(rest),
        _ => false,
    }
}

/// A flattened product: a constant coefficient times factors, with powers of
/// a common t-dependent base merged.
#[derive(Default)]
struct Product {
    coeff: Option<f64>,
    factors: Vec<(Expr, f64)>,
}

impl Product {
    fn collect(&mut self, e: Expr) {
        match e {
            Expr::Const(c) => *self.coeff.get_or_insert(1.0) *= c,
            Expr::Mul(l, r) => {
                self.collect(*l);
                self.collect(*r);
            }
            Expr::Neg(inner) => {
                *self.coeff.get_or_insert(1.0) *= -1.0;
                self.collect(*inner);
            }
            other => {
                let (base, exp) = as_power(&other);
                if base.contains_var() {
                    if let Some(entry) = self.factors.iter_mut().find(|(b, _)| b == base) {
                        entry.1 += exp;
                        return;
                    }
                    let base = base.clone();
                    self.factors.push((base, exp));
                } else {
                    self.factors.push((other, 1.0));
                }
            }
        }
    }

    fn rebuild(self) -> Expr {
        let coeff = self.coeff.unwrap_or(1.0);
        if coeff == 0.0 {
            return Expr::Const(0.0);
        }
        let mut factors: Vec<Expr> = self
            .factors
            .into_iter()
            .filter(|(_, exp)| *exp != 0.0)
            .map(|(base, exp)| rewrite_pow(base, exp))
            .collect();
        let Some(mut body) = factors.pop() else {
            return Expr::Const(coeff);
        };
        while let Some(f) = factors.pop() {
            body = f * body;
        }
        if coeff == 1.0 {
            body
        } else {
            Expr::Const(coeff) * body
        }
    }
}

fn rewrite_div(a: Expr, b: Expr) -> Expr {
    use Expr::*;
    match (a, b) {
        (Const(x), Const(y)) if y != 0.0 => finite(x / y).unwrap_or(Const(x) / Const(y)),
        (Const(0.0), _) => Const(0.0),
        (other, Const(1.0)) => other,
        (a, b) => a / b,
    }
}

fn rewrite_pow(base: Expr, c: f64) -> Expr {
    use Expr::*;
    if c == 0.0 {
        return Const(1.0);
    }
    if c == 1.0 {
        return base;
    }
    match base {
        Const(b) => match pow_checked(b, c).ok().and_then(finite) {
            Some(folded) => folded,
            None => Const(b).powf(c),
        },
        Pow(inner, d) if is_integer(c) => {
            let merged = d * c;
            if merged.is_finite() {
                Pow(inner, merged)
            } else {
                Pow(inner, d).powf(c)
            }
        }
        other => other.powf(c),
    }
}
