pub mod delaunay_lorentz;
pub mod elliptic;
pub mod helicoid;
pub mod kenmotsu;
pub mod lingeo;
pub mod mesh_io;
pub mod period;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/elliptic.md")]
    mod elliptic {}
    #[doc = include_str!("../../../book/src/helicoid.md")]
    mod helicoid {}
    #[doc = include_str!("../../../book/src/period.md")]
    mod period {}
    #[doc = include_str!("../../../book/src/kenmotsu.md")]
    mod kenmotsu {}
    #[doc = include_str!("../../../book/src/delaunay.md")]
    mod delaunay {}
    #[doc = include_str!("../../../book/src/mesh_io.md")]
    mod mesh_io {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
