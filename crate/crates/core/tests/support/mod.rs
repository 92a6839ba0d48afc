pub mod gen;
pub mod oracle;
pub mod rewrite_oracle;
pub mod unify_oracle;
