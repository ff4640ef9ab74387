#[doc = include_str!("../../../book/src/quickstart.md")]
mod quickstart {}

#[doc = include_str!("../../../book/src/units.md")]
mod units {}

#[doc = include_str!("../../../book/src/pair_state.md")]
mod pair_state {}

#[doc = include_str!("../../../book/src/na_function.md")]
mod na_function {}

#[doc = include_str!("../../../book/src/potentials.md")]
mod potentials {}

#[doc = include_str!("../../../book/src/moments.md")]
mod moments {}

#[doc = include_str!("../../../book/src/quadrature.md")]
mod quadrature {}

#[doc = include_str!("../../../book/src/cli.md")]
mod cli {}

#[doc = include_str!("../../../book/src/derivation_notes.md")]
mod derivation_notes {}
