use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Hard ceiling on the jet order handled by the library.
pub const MAX_ORDER: usize = 4;

/// Monomial bookkeeping for truncated Taylor polynomials in `dim` variables
/// up to total degree `order`.
///
/// Monomials are stored in graded order (all degree-0, then degree-1, ...),
/// so the coefficient vector of a lower-order jet is a prefix of the
/// coefficient vector of a higher-order one.
#[derive(Debug)]
pub struct Layout {
    dim: usize,
    order: usize,
    exponents: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
    degree_start: Vec<usize>,
    products: Vec<(u32, u32, u32)>,
    // per variable: (source, target, factor) for d/dx_i into a layout one order lower
    derivatives: Vec<Vec<(u32, u32, u32)>>,
}

impl Layout {
    /// Shared, cached layout for the given dimension and order.
    pub fn get(dim: usize, order: usize) -> Arc<Layout> {
        static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<Layout>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("layout cache poisoned");
        guard
            .entry((dim, order))
            .or_insert_with(|| Arc::new(Layout::build(dim, order)))
            .clone()
    }

    fn build(dim: usize, order: usize) -> Layout {
        let mut exponents = Vec::new();
        let mut degree_start = Vec::with_capacity(order + 2);
        for degree in 0..=order {
            degree_start.push(exponents.len());
            let mut current = vec![0u8; dim];
            push_degree(&mut exponents, &mut current, 0, degree);
        }
        degree_start.push(exponents.len());
        let index: HashMap<Vec<u8>, usize> =
            exponents.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();

        let mut products = Vec::new();
        for (a, ea) in exponents.iter().enumerate() {
            let da: usize = ea.iter().map(|&v| v as usize).sum();
            for (b, eb) in exponents.iter().enumerate() {
                let db: usize = eb.iter().map(|&v| v as usize).sum();
                if da + db > order {
                    continue;
                }
                let sum: Vec<u8> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                products.push((a as u32, b as u32, index[&sum] as u32));
            }
        }

        let mut derivatives = vec![Vec::new(); dim];
        if order > 0 {
            let lower = degree_start[order];
            for (var, table) in derivatives.iter_mut().enumerate() {
                for (target, e) in exponents[..lower].iter().enumerate() {
                    let mut raised = e.clone();
                    raised[var] += 1;
                    let source = index[&raised];
                    table.push((source as u32, target as u32, raised[var] as u32));
                }
            }
        }

        Layout { dim, order, exponents, index, degree_start, products, derivatives }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponents(&self) -> &[Vec<u8>] {
        &self.exponents
    }

    pub fn index_of(&self, exponents: &[u8]) -> Option<usize> {
        self.index.get(exponents).copied()
    }

    /// Index range of the monomials of exactly the given degree.
    pub fn degree_range(&self, degree: usize) -> std::ops::Range<usize> {
        self.degree_start[degree]..self.degree_start[degree + 1]
    }

    /// Number of monomials of degree at most `order` (prefix length).
    pub fn prefix_len(&self, order: usize) -> usize {
        self.degree_start[order.min(self.order) + 1]
    }

    pub(crate) fn products(&self) -> &[(u32, u32, u32)] {
        &self.products
    }

    pub(crate) fn derivative_table(&self, var: usize) -> &[(u32, u32, u32)] {
        &self.derivatives[var]
    }
}

fn push_degree(out: &mut Vec<Vec<u8>>, current: &mut Vec<u8>, var: usize, remaining: usize) {
    if var + 1 == current.len() {
        current[var] = remaining as u8;
        out.push(current.clone());
        current[var] = 0;
        return;
    }
    if current.is_empty() {
        if remaining == 0 {
            out.push(Vec::new());
        }
        return;
    }
    for k in (0..=remaining).rev() {
        current[var] = k as u8;
        push_degree(out, current, var + 1, remaining - k);
    }
    current[var] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_counts_match_binomials() {
        // C(d + K, K)
        assert_eq!(Layout::get(3, 2).len(), 10);
        assert_eq!(Layout::get(5, 4).len(), 126);
        assert_eq!(Layout::get(1, 4).len(), 5);
        assert_eq!(Layout::get(4, 0).len(), 1);
    }

    #[test]
    fn lower_orders_are_prefixes() {
        let hi = Layout::get(3, 4);
        let lo = Layout::get(3, 2);
        assert_eq!(&hi.exponents()[..lo.len()], lo.exponents());
        assert_eq!(hi.prefix_len(2), lo.len());
    }
}
