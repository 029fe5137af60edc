use crate::ffla::Field;
use crate::homalg::HallContext;
use crate::quiverrep::{ClassNames, EnumerationLimits, IsoClassId, IsoClassTable, Quiver, RepCategory};

pub fn context(quiver: Quiver, q: u32, caps: Vec<usize>) -> HallContext {
    let cat = RepCategory::new(quiver, Field::new(q).unwrap());
    HallContext::new(IsoClassTable::enumerate(cat, caps, None, EnumerationLimits::default()).unwrap())
}

pub fn a2(q: u32, caps: Vec<usize>) -> HallContext {
    context(Quiver::linear(2), q, caps)
}

pub fn point(q: u32, cap: usize) -> HallContext {
    context(Quiver::point(), q, vec![cap])
}

/// Resolves aliases such as `"S1"`, `"P"` or `"S1+S2"`.
pub fn ids<const N: usize>(ctx: &HallContext, names: [&str; N]) -> [IsoClassId; N] {
    let alias = ClassNames::new(ctx.table());
    names.map(|n| alias.resolve(ctx.table(), n).unwrap())
}
