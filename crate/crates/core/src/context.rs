use std::sync::Arc;

use crate::error::{DiffAlgError, Result};

/// Default engine-wide cap on the total derivative order of any jet variable.
pub const DEFAULT_MAX_ORDER: u32 = 8;

/// Declaration of an arbitrary-function symbol family `F(arg)`.
///
/// The family consists of the symbols `F, F', F'', ...` with the single
/// rewrite rule `d/d(arg) F^(k) = F^(k+1)`; derivatives in every other
/// direction vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuncDecl {
    pub name: String,
    /// Index of the independent variable the family depends on.
    pub arg: usize,
}

/// Naming convention for a jet space: ordered independent and dependent
/// variables plus declared arbitrary-function families.
///
/// Every `DiffPoly` carries a shared reference to the convention it was
/// built in; indices into polynomials are positions in these lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexConvention {
    indep: Vec<String>,
    dep: Vec<String>,
    funcs: Vec<FuncDecl>,
    max_order: u32,
}

/// Shared handle to an [`IndexConvention`].
pub type Ctx = Arc<IndexConvention>;

fn check_name(name: &str) -> Result<()> {
    let ok = !name.is_empty()
        && name.chars().next().unwrap().is_ascii_alphabetic()
        && name.chars().all(|c| c.is_ascii_alphanumeric())
        && name != "D";
    if ok {
        Ok(())
    } else {
        Err(DiffAlgError::InvalidName {
            name: name.to_string(),
            reason: "names are ASCII, start with a letter, contain no underscores, \
                     and `D` is reserved"
                .to_string(),
        })
    }
}

impl IndexConvention {
    pub fn new(indep: &[&str], dep: &[&str]) -> Result<Self> {
        let conv = IndexConvention {
            indep: indep.iter().map(|s| s.to_string()).collect(),
            dep: dep.iter().map(|s| s.to_string()).collect(),
            funcs: Vec::new(),
            max_order: DEFAULT_MAX_ORDER,
        };
        conv.validate()?;
        Ok(conv)
    }

    /// The default `(t, x, y)` convention with the given dependent variables.
    pub fn txy(dep: &[&str]) -> Result<Self> {
        Self::new(&["t", "x", "y"], dep)
    }

    fn validate(&self) -> Result<()> {
        if self.indep.is_empty() {
            return Err(DiffAlgError::InvalidName {
                name: String::new(),
                reason: "at least one independent variable is required".into(),
            });
        }
        let mut seen: Vec<&str> = Vec::new();
        for name in self
            .indep
            .iter()
            .chain(self.dep.iter())
            .chain(self.funcs.iter().map(|f| &f.name))
        {
            check_name(name)?;
            if seen.contains(&name.as_str()) {
                return Err(DiffAlgError::NameCollision { name: name.clone() });
            }
            seen.push(name);
        }
        Ok(())
    }

    pub fn into_ctx(self) -> Ctx {
        Arc::new(self)
    }

    pub fn n_indep(&self) -> usize {
        self.indep.len()
    }

    pub fn n_dep(&self) -> usize {
        self.dep.len()
    }

    pub fn n_funcs(&self) -> usize {
        self.funcs.len()
    }

    pub fn max_order(&self) -> u32 {
        self.max_order
    }

    pub fn with_max_order(mut self, max_order: u32) -> Self {
        self.max_order = max_order;
        self
    }

    pub fn indep_name(&self, i: usize) -> &str {
        &self.indep[i]
    }

    pub fn dep_name(&self, i: usize) -> &str {
        &self.dep[i]
    }

    pub fn func(&self, i: usize) -> &FuncDecl {
        &self.funcs[i]
    }

    pub fn indep_names(&self) -> &[String] {
        &self.indep
    }

    pub fn dep_names(&self) -> &[String] {
        &self.dep
    }

    pub fn funcs(&self) -> &[FuncDecl] {
        &self.funcs
    }

    pub fn indep_index(&self, name: &str) -> Option<usize> {
        self.indep.iter().position(|n| n == name)
    }

    pub fn dep_index(&self, name: &str) -> Option<usize> {
        self.dep.iter().position(|n| n == name)
    }

    pub fn func_index(&self, name: &str) -> Option<usize> {
        self.funcs.iter().position(|f| f.name == name)
    }

    pub fn has_symbol(&self, name: &str) -> bool {
        self.indep_index(name).is_some()
            || self.dep_index(name).is_some()
            || self.func_index(name).is_some()
    }

    /// New convention with an arbitrary-function family appended.
    pub fn with_func(&self, name: &str, arg: &str) -> Result<Self> {
        let arg_idx = self
            .indep_index(arg)
            .ok_or_else(|| DiffAlgError::UnknownSymbolInContext {
                name: arg.to_string(),
            })?;
        if self.has_symbol(name) {
            return Err(DiffAlgError::NameCollision {
                name: name.to_string(),
            });
        }
        let mut conv = self.clone();
        conv.funcs.push(FuncDecl {
            name: name.to_string(),
            arg: arg_idx,
        });
        conv.validate()?;
        Ok(conv)
    }

    /// New convention with dependent variables appended (used to adjoin
    /// adjoint variables to a system's convention).
    pub fn with_deps(&self, names: &[&str]) -> Result<Self> {
        let mut conv = self.clone();
        for name in names {
            if self.has_symbol(name) {
                return Err(DiffAlgError::NameCollision {
                    name: name.to_string(),
                });
            }
            conv.dep.push(name.to_string());
        }
        conv.validate()?;
        Ok(conv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicate_and_invalid_names() {
        assert!(IndexConvention::new(&["t", "x"], &["u", "t"]).is_err());
        assert!(IndexConvention::new(&["t"], &["u_1"]).is_err());
        assert!(IndexConvention::new(&["t"], &["D"]).is_err());
        assert!(IndexConvention::new(&["t", "x", "y"], &["u", "w"]).is_ok());
    }

    #[test]
    fn extension_preserves_positions() {
        let base = IndexConvention::txy(&["u", "w"]).unwrap();
        let ext = base.with_deps(&["v", "z"]).unwrap();
        assert_eq!(ext.dep_index("u"), Some(0));
        assert_eq!(ext.dep_index("w"), Some(1));
        assert_eq!(ext.dep_index("v"), Some(2));
        assert_eq!(ext.dep_index("z"), Some(3));
        assert!(base.with_deps(&["u"]).is_err());
    }

    #[test]
    fn func_families_need_valid_argument() {
        let base = IndexConvention::txy(&["u", "w"]).unwrap();
        let ext = base.with_func("f", "t").unwrap();
        assert_eq!(ext.func_index("f"), Some(0));
        assert_eq!(ext.func(0).arg, 0);
        assert!(base.with_func("f", "q").is_err());
        assert!(ext.with_func("u", "t").is_err());
    }
}
