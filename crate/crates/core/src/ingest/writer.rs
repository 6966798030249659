//! ODL pretty-printer. Output parses back to the same model.

use std::fmt::Write;

use crate::model::ClassModel;

const DOC: &str = "/** */";

pub fn write_odl(model: &ClassModel) -> String {
    let mut out = String::new();
    for (i, class) in model.classes().iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        if class.documented {
            out.push_str(DOC);
            out.push('\n');
        }
        write!(out, "{} {}", class.kind.keyword(), class.name).unwrap();
        if !class.parents.is_empty() {
            write!(out, " extends {}", class.parents.join(", ")).unwrap();
        }
        out.push_str(" {\n");
        for attr in &class.attributes {
            if attr.documented {
                writeln!(out, "    {DOC}").unwrap();
            }
            writeln!(
                out,
                "    {} {} {};",
                attr.visibility.keyword(),
                attr.type_name,
                attr.name
            )
            .unwrap();
        }
        for method in &class.methods {
            if method.documented {
                writeln!(out, "    {DOC}").unwrap();
            }
            let params: Vec<String> = method
                .parameter_types
                .iter()
                .enumerate()
                .map(|(i, ty)| format!("{ty} p{i}"))
                .collect();
            writeln!(
                out,
                "    {} {} {}({});",
                method.visibility.keyword(),
                method.return_type,
                method.name,
                params.join(", ")
            )
            .unwrap();
        }
        out.push_str("}\n");
    }
    out
}
