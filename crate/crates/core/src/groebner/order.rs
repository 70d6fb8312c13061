use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::polycore::Monomial;

/// Orders usable on either side of a block order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaseOrder {
    GrevLex,
    Lex,
}

/// A global monomial order. Variables rank x_0 > x_1 > ... inside every
/// base order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    GrevLex,
    Lex,
    /// Elimination order: the parts of two monomials in the block variables
    /// are compared first with `outer`; ties are broken by comparing the
    /// remaining variables with `inner`. Any monomial involving a block
    /// variable is larger than every monomial free of them.
    Block { block: Vec<bool>, inner: BaseOrder, outer: BaseOrder },
}

impl MonomialOrder {
    pub fn block(block: &BTreeSet<usize>, inner: BaseOrder, outer: BaseOrder) -> Self {
        let width = block.iter().next_back().map_or(0, |&v| v + 1);
        let mut mask = vec![false; width];
        for &v in block {
            mask[v] = true;
        }
        MonomialOrder::Block { block: mask, inner, outer }
    }

    /// Standard elimination order with grevlex on both sides.
    pub fn elimination(block: &BTreeSet<usize>) -> Self {
        Self::block(block, BaseOrder::GrevLex, BaseOrder::GrevLex)
    }

    pub fn is_block_var(&self, v: usize) -> bool {
        match self {
            MonomialOrder::Block { block, .. } => block.get(v).copied().unwrap_or(false),
            _ => false,
        }
    }

    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::GrevLex => a.cmp_grevlex(b),
            MonomialOrder::Lex => a.cmp_lex(b),
            MonomialOrder::Block { block, inner, outer } => {
                let in_block = |v: usize| block.get(v).copied().unwrap_or(false);
                match compare_on(*outer, a, b, in_block) {
                    Ordering::Equal => compare_on(*inner, a, b, |v| !in_block(v)),
                    o => o,
                }
            }
        }
    }
}

fn compare_on(kind: BaseOrder, a: &Monomial, b: &Monomial, keep: impl Fn(usize) -> bool) -> Ordering {
    let n = a.width().max(b.width());
    match kind {
        BaseOrder::GrevLex => {
            let deg = |m: &Monomial| -> u32 { m.iter().filter(|(v, _)| keep(*v)).map(|(_, e)| e).sum() };
            match deg(a).cmp(&deg(b)) {
                Ordering::Equal => {}
                o => return o,
            }
            for i in (0..n).rev() {
                if !keep(i) {
                    continue;
                }
                let (x, y) = (a.exponent(i), b.exponent(i));
                if x != y {
                    return y.cmp(&x);
                }
            }
            Ordering::Equal
        }
        BaseOrder::Lex => {
            for i in 0..n {
                if !keep(i) {
                    continue;
                }
                let (x, y) = (a.exponent(i), b.exponent(i));
                if x != y {
                    return x.cmp(&y);
                }
            }
            Ordering::Equal
        }
    }
}
