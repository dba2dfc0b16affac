use num_complex::Complex64;

/// Compensated (Kahan-Babuska-Neumaier) accumulator for complex sums.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct KahanSum {
    sum: Complex64,
    comp: Complex64,
}

fn add_part(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

impl KahanSum {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub(crate) fn add(&mut self, x: Complex64) {
        add_part(&mut self.sum.re, &mut self.comp.re, x.re);
        add_part(&mut self.sum.im, &mut self.comp.im, x.im);
    }

    pub(crate) fn total(&self) -> Complex64 {
        self.sum + self.comp
    }
}
