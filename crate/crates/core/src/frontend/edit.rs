use indexmap::IndexSet;

use super::model::{Delta, ProgramModel};
use super::parser::build_method;
use super::FrontendError;

/// Returns a copy of `model` with one method body replaced.
///
/// The new body is checked against the model's declared classes exactly as
/// the parser would check it; the input model is left untouched.
pub fn apply_edit(model: &ProgramModel, delta: &Delta) -> Result<ProgramModel, FrontendError> {
    if model.method(&delta.method).is_none() {
        return Err(FrontendError::UnknownMethod(delta.method.clone()));
    }
    let declared: IndexSet<&str> = model.classes.keys().map(String::as_str).collect();
    let rebuilt = build_method(
        &delta.method.class_name,
        &delta.method.method_name,
        delta.new_body.clone(),
        &declared,
    )?;
    let mut edited = model.clone();
    let slot = edited.classes[&delta.method.class_name]
        .methods
        .get_mut(&delta.method.method_name)
        .expect("presence checked above");
    *slot = rebuilt;
    Ok(edited)
}
