pub mod lifted_h;
