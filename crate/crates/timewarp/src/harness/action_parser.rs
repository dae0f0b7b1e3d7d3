//! Parser for the call-expression action DSL: one identifier, a parenthesized
//! argument list with quoted strings (escape sequences), numbers, booleans,
//! lists, and keyword arguments. Arity and enum domains are validated per
//! action.

use thiserror::Error;

use crate::env::action::{Action, Modifier, MouseButton};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ActionParseError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown action: {0}")]
    UnknownAction(String),
    #[error("{action}: expected {expected} argument(s), got {got}")]
    Arity {
        action: String,
        expected: String,
        got: usize,
    },
    #[error("{action}: bad argument {arg}: {reason}")]
    BadArgument {
        action: String,
        arg: String,
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq)]
enum Value {
    Str(String),
    Num { value: f64, integral: bool },
    Bool(bool),
    List(Vec<Value>),
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Str(_) => "string",
            Value::Num { .. } => "number",
            Value::Bool(_) => "boolean",
            Value::List(_) => "list",
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Value(Value),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Eq,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn next_token(&mut self) -> Result<Option<Token>, ActionParseError> {
        self.skip_ws();
        let rest = self.rest();
        let Some(c) = rest.chars().next() else {
            return Ok(None);
        };
        let simple = match c {
            '(' => Some(Token::LParen),
            ')' => Some(Token::RParen),
            '[' => Some(Token::LBracket),
            ']' => Some(Token::RBracket),
            ',' => Some(Token::Comma),
            '=' => Some(Token::Eq),
            _ => None,
        };
        if let Some(token) = simple {
            self.pos += 1;
            return Ok(Some(token));
        }
        if c == '\'' || c == '"' {
            return Ok(Some(Token::Value(Value::Str(self.lex_string(c)?))));
        }
        if c.is_ascii_digit() || c == '-' || c == '+' {
            return Ok(Some(Token::Value(self.lex_number()?)));
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let ident: String = rest
                .chars()
                .take_while(|ch| ch.is_ascii_alphanumeric() || *ch == '_')
                .collect();
            self.pos += ident.len();
            return Ok(Some(match ident.as_str() {
                "True" | "true" => Token::Value(Value::Bool(true)),
                "False" | "false" => Token::Value(Value::Bool(false)),
                _ => Token::Ident(ident),
            }));
        }
        Err(ActionParseError::Syntax(format!(
            "unexpected character {c:?} at byte {}",
            self.pos
        )))
    }

    fn lex_string(&mut self, quote: char) -> Result<String, ActionParseError> {
        let mut out = String::new();
        let mut chars = self.rest().char_indices();
        chars.next(); // opening quote
        while let Some((i, c)) = chars.next() {
            match c {
                '\\' => match chars.next() {
                    Some((_, 'n')) => out.push('\n'),
                    Some((_, 't')) => out.push('\t'),
                    Some((_, escaped)) => out.push(escaped),
                    None => return Err(ActionParseError::Syntax("dangling escape".into())),
                },
                c if c == quote => {
                    self.pos += i + c.len_utf8();
                    return Ok(out);
                }
                c => out.push(c),
            }
        }
        Err(ActionParseError::Syntax("unterminated string".into()))
    }

    fn lex_number(&mut self) -> Result<Value, ActionParseError> {
        let rest = self.rest();
        let mut len = 0;
        let mut integral = true;
        for (i, c) in rest.char_indices() {
            match c {
                '0'..='9' => len = i + 1,
                '-' | '+' if i == 0 => len = 1,
                '.' => {
                    integral = false;
                    len = i + 1;
                }
                _ => break,
            }
        }
        let text = &rest[..len];
        let value: f64 = text
            .parse()
            .map_err(|_| ActionParseError::Syntax(format!("bad number {text:?}")))?;
        self.pos += len;
        Ok(Value::Num { value, integral })
    }
}

struct Call {
    name: String,
    positional: Vec<Value>,
    keyword: Vec<(String, Value)>,
}

fn parse_call(src: &str) -> Result<Call, ActionParseError> {
    let mut lexer = Lexer::new(src);
    let name = match lexer.next_token()? {
        Some(Token::Ident(name)) => name,
        other => {
            return Err(ActionParseError::Syntax(format!(
                "expected an action name, got {other:?}"
            )))
        }
    };
    match lexer.next_token()? {
        Some(Token::LParen) => {}
        other => {
            return Err(ActionParseError::Syntax(format!(
                "expected '(' after {name}, got {other:?}"
            )))
        }
    }
    let mut positional = Vec::new();
    let mut keyword: Vec<(String, Value)> = Vec::new();
    loop {
        let token = lexer
            .next_token()?
            .ok_or_else(|| ActionParseError::Syntax("unterminated call".into()))?;
        match token {
            Token::RParen => break,
            Token::Comma => continue,
            Token::Ident(key) => {
                match lexer.next_token()? {
                    Some(Token::Eq) => {}
                    other => {
                        return Err(ActionParseError::Syntax(format!(
                            "expected '=' after keyword {key}, got {other:?}"
                        )))
                    }
                }
                let value = parse_value(&mut lexer)?;
                keyword.push((key, value));
            }
            Token::Value(v) => {
                if !keyword.is_empty() {
                    return Err(ActionParseError::Syntax(
                        "positional argument after keyword argument".into(),
                    ));
                }
                positional.push(v);
            }
            Token::LBracket => {
                positional.push(parse_list(&mut lexer)?);
            }
            other => {
                return Err(ActionParseError::Syntax(format!("unexpected token {other:?}")))
            }
        }
    }
    lexer.skip_ws();
    if !lexer.rest().is_empty() {
        return Err(ActionParseError::Syntax(format!(
            "trailing input after call: {:?}",
            lexer.rest()
        )));
    }
    Ok(Call { name, positional, keyword })
}

fn parse_value(lexer: &mut Lexer<'_>) -> Result<Value, ActionParseError> {
    match lexer.next_token()? {
        Some(Token::Value(v)) => Ok(v),
        Some(Token::LBracket) => parse_list(lexer),
        other => Err(ActionParseError::Syntax(format!(
            "expected a value, got {other:?}"
        ))),
    }
}

fn parse_list(lexer: &mut Lexer<'_>) -> Result<Value, ActionParseError> {
    let mut items = Vec::new();
    loop {
        match lexer.next_token()? {
            Some(Token::RBracket) => return Ok(Value::List(items)),
            Some(Token::Comma) => continue,
            Some(Token::Value(v)) => items.push(v),
            Some(Token::LBracket) => items.push(parse_list(lexer)?),
            other => {
                return Err(ActionParseError::Syntax(format!(
                    "unexpected token in list: {other:?}"
                )))
            }
        }
    }
}

/// Bind positional and keyword arguments against a parameter list.
struct Binder<'c> {
    call: &'c Call,
    params: &'static [&'static str],
    bound: Vec<Option<Value>>,
}

impl<'c> Binder<'c> {
    fn new(call: &'c Call, params: &'static [&'static str]) -> Result<Binder<'c>, ActionParseError> {
        if call.positional.len() > params.len() {
            return Err(ActionParseError::Arity {
                action: call.name.clone(),
                expected: format!("at most {}", params.len()),
                got: call.positional.len(),
            });
        }
        let mut bound: Vec<Option<Value>> = vec![None; params.len()];
        for (i, v) in call.positional.iter().enumerate() {
            bound[i] = Some(v.clone());
        }
        for (key, value) in &call.keyword {
            let Some(index) = params.iter().position(|p| p == key) else {
                return Err(ActionParseError::BadArgument {
                    action: call.name.clone(),
                    arg: key.clone(),
                    reason: "unknown keyword".into(),
                });
            };
            if bound[index].is_some() {
                return Err(ActionParseError::BadArgument {
                    action: call.name.clone(),
                    arg: key.clone(),
                    reason: "assigned twice".into(),
                });
            }
            bound[index] = Some(value.clone());
        }
        Ok(Binder { call, params, bound })
    }

    fn required(&mut self, index: usize) -> Result<Value, ActionParseError> {
        self.bound[index].take().ok_or_else(|| ActionParseError::Arity {
            action: self.call.name.clone(),
            expected: format!("argument '{}'", self.params[index]),
            got: self.call.positional.len(),
        })
    }

    fn optional(&mut self, index: usize) -> Option<Value> {
        self.bound[index].take()
    }

    fn str_of(&self, index: usize, v: Value) -> Result<String, ActionParseError> {
        match v {
            Value::Str(s) => Ok(s),
            other => Err(self.type_error(index, "string", &other)),
        }
    }

    fn num_of(&self, index: usize, v: Value) -> Result<f64, ActionParseError> {
        match v {
            Value::Num { value, .. } => Ok(value),
            other => Err(self.type_error(index, "number", &other)),
        }
    }

    fn int_of(&self, index: usize, v: Value) -> Result<i64, ActionParseError> {
        match v {
            Value::Num { value, integral: true } => Ok(value as i64),
            other => Err(self.type_error(index, "integer", &other)),
        }
    }

    fn bool_of(&self, index: usize, v: Value) -> Result<bool, ActionParseError> {
        match v {
            Value::Bool(b) => Ok(b),
            other => Err(self.type_error(index, "boolean", &other)),
        }
    }

    fn type_error(&self, index: usize, expected: &str, got: &Value) -> ActionParseError {
        ActionParseError::BadArgument {
            action: self.call.name.clone(),
            arg: self.params[index].to_string(),
            reason: format!("expected {expected}, got {}", got.kind()),
        }
    }
}

/// Parse one action call expression into an [`Action`].
pub fn parse_action(text: &str) -> Result<Action, ActionParseError> {
    let call = parse_call(text.trim())?;
    let name = call.name.clone();
    match name.as_str() {
        "scroll" => {
            let mut b = Binder::new(&call, &["delta_x", "delta_y"])?;
            let dx = b.required(0)?;
            let dy = b.required(1)?;
            Ok(Action::Scroll {
                delta_x: b.num_of(0, dx)?,
                delta_y: b.num_of(1, dy)?,
            })
        }
        "fill" => {
            let mut b = Binder::new(&call, &["bid", "value", "enable_autocomplete_menu"])?;
            let bid = b.required(0)?;
            let value = b.required(1)?;
            let auto = b.optional(2);
            Ok(Action::Fill {
                bid: b.str_of(0, bid)?,
                value: b.str_of(1, value)?,
                enable_autocomplete_menu: match auto {
                    Some(v) => b.bool_of(2, v)?,
                    None => false,
                },
            })
        }
        "click" => {
            let mut b = Binder::new(&call, &["bid", "button", "modifiers"])?;
            let bid = b.required(0)?;
            let bid = b.str_of(0, bid)?;
            let button = match b.optional(1) {
                Some(v) => {
                    let s = b.str_of(1, v)?;
                    MouseButton::parse(&s).ok_or_else(|| ActionParseError::BadArgument {
                        action: name.clone(),
                        arg: "button".into(),
                        reason: format!("must be left, middle, or right; got {s:?}"),
                    })?
                }
                None => MouseButton::Left,
            };
            let modifiers = match b.optional(2) {
                Some(Value::List(items)) => {
                    let mut mods = Vec::with_capacity(items.len());
                    for item in items {
                        let s = match item {
                            Value::Str(s) => s,
                            other => {
                                return Err(ActionParseError::BadArgument {
                                    action: name.clone(),
                                    arg: "modifiers".into(),
                                    reason: format!("expected strings, got {}", other.kind()),
                                })
                            }
                        };
                        let parsed =
                            Modifier::parse(&s).ok_or_else(|| ActionParseError::BadArgument {
                                action: name.clone(),
                                arg: "modifiers".into(),
                                reason: format!("unknown modifier {s:?}"),
                            })?;
                        mods.push(parsed);
                    }
                    mods
                }
                Some(other) => {
                    return Err(ActionParseError::BadArgument {
                        action: name,
                        arg: "modifiers".into(),
                        reason: format!("expected a list, got {}", other.kind()),
                    })
                }
                None => Vec::new(),
            };
            Ok(Action::Click { bid, button, modifiers })
        }
        "press" => {
            let mut b = Binder::new(&call, &["bid", "key_comb"])?;
            let bid = b.required(0)?;
            let key = b.required(1)?;
            Ok(Action::Press {
                bid: b.str_of(0, bid)?,
                key_comb: b.str_of(1, key)?,
            })
        }
        "go_back" => {
            Binder::new(&call, &[])?;
            ensure_no_args(&call)?;
            Ok(Action::GoBack)
        }
        "goto" => {
            let mut b = Binder::new(&call, &["url"])?;
            let url = b.required(0)?;
            Ok(Action::Goto { url: b.str_of(0, url)? })
        }
        "send_msg_to_user" => {
            let mut b = Binder::new(&call, &["text"])?;
            let text = b.required(0)?;
            Ok(Action::SendMsgToUser { text: b.str_of(0, text)? })
        }
        "report_infeasible" => {
            let mut b = Binder::new(&call, &["reason"])?;
            let reason = b.required(0)?;
            Ok(Action::ReportInfeasible { reason: b.str_of(0, reason)? })
        }
        "new_tab" => {
            Binder::new(&call, &[])?;
            ensure_no_args(&call)?;
            Ok(Action::NewTab)
        }
        "tab_close" => {
            Binder::new(&call, &[])?;
            ensure_no_args(&call)?;
            Ok(Action::TabClose)
        }
        "tab_focus" => {
            let mut b = Binder::new(&call, &["index"])?;
            let index = b.required(0)?;
            Ok(Action::TabFocus { index: b.int_of(0, index)? })
        }
        other => Err(ActionParseError::UnknownAction(other.to_string())),
    }
}

fn ensure_no_args(call: &Call) -> Result<(), ActionParseError> {
    if call.positional.is_empty() && call.keyword.is_empty() {
        Ok(())
    } else {
        Err(ActionParseError::Arity {
            action: call.name.clone(),
            expected: "0".into(),
            got: call.positional.len() + call.keyword.len(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_printed_example() {
        let cases: Vec<(&str, Action)> = vec![
            ("scroll(0, 200)", Action::scroll(0.0, 200.0)),
            ("scroll(-50.2, -100.5)", Action::scroll(-50.2, -100.5)),
            (
                "fill('45', 'multi-line\\n example')",
                Action::fill("45", "multi-line\n example"),
            ),
            (
                "fill('a12', 'example with \"quotes\"')",
                Action::fill("a12", "example with \"quotes\""),
            ),
            (
                "fill('b534', 'Montre', True)",
                Action::Fill {
                    bid: "b534".into(),
                    value: "Montre".into(),
                    enable_autocomplete_menu: true,
                },
            ),
            ("click('a51')", Action::click("a51")),
            (
                "click('b22', button='right')",
                Action::Click {
                    bid: "b22".into(),
                    button: MouseButton::Right,
                    modifiers: vec![],
                },
            ),
            (
                "click('48', button='middle', modifiers=['Shift'])",
                Action::Click {
                    bid: "48".into(),
                    button: MouseButton::Middle,
                    modifiers: vec![Modifier::Shift],
                },
            ),
            ("press('88', 'Backspace')", Action::press("88", "Backspace")),
            ("press('a26', 'ControlOrMeta+a')", Action::press("a26", "ControlOrMeta+a")),
            ("press('a61', 'Meta+Shift+t')", Action::press("a61", "Meta+Shift+t")),
            ("go_back()", Action::GoBack),
            ("goto('http://www.example.com')", Action::goto("http://www.example.com")),
            (
                "send_msg_to_user('Based on the results of my search, the city was built in 1751.')",
                Action::send_msg("Based on the results of my search, the city was built in 1751."),
            ),
            (
                "report_infeasible('I cannot follow these instructions because there is no email field in this form.')",
                Action::ReportInfeasible {
                    reason: "I cannot follow these instructions because there is no email field in this form."
                        .into(),
                },
            ),
            ("new_tab()", Action::NewTab),
            ("tab_close()", Action::TabClose),
            ("tab_focus(2)", Action::TabFocus { index: 2 }),
        ];
        for (src, expected) in cases {
            assert_eq!(parse_action(src).unwrap(), expected, "parsing {src}");
        }
    }

    #[test]
    fn round_trips_through_display() {
        let actions = vec![
            Action::scroll(-50.2, -100.5),
            Action::Fill { bid: "b534".into(), value: "Montre".into(), enable_autocomplete_menu: true },
            Action::fill("45", "multi-line\n example"),
            Action::Click { bid: "48".into(), button: MouseButton::Middle, modifiers: vec![Modifier::Shift] },
            Action::click("a51"),
            Action::press("a26", "ControlOrMeta+a"),
            Action::GoBack,
            Action::goto("timewarp://wiki/"),
            Action::send_msg("It's done: 'quoted' and \\backslash"),
            Action::ReportInfeasible { reason: "no such page".into() },
            Action::NewTab,
            Action::TabClose,
            Action::TabFocus { index: 3 },
        ];
        for action in actions {
            let serialized = action.to_string();
            let reparsed = parse_action(&serialized).unwrap();
            assert_eq!(reparsed, action, "via {serialized}");
        }
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!(parse_action("warp_speed('9')"), Err(ActionParseError::UnknownAction(_))));
        assert!(matches!(parse_action("click()"), Err(ActionParseError::Arity { .. })));
        assert!(matches!(parse_action("scroll(1)"), Err(ActionParseError::Arity { .. })));
        assert!(matches!(
            parse_action("click('a', button='sideways')"),
            Err(ActionParseError::BadArgument { .. })
        ));
        assert!(matches!(
            parse_action("tab_focus(2.5)"),
            Err(ActionParseError::BadArgument { .. })
        ));
        assert!(matches!(
            parse_action("click('a') click('b')"),
            Err(ActionParseError::Syntax(_))
        ));
        assert!(matches!(parse_action(""), Err(ActionParseError::Syntax(_))));
        assert!(matches!(
            parse_action("click('a', modifiers=['Turbo'])"),
            Err(ActionParseError::BadArgument { .. })
        ));
    }

    #[test]
    fn keyword_forms_of_positional_params_bind() {
        assert_eq!(
            parse_action("fill(bid='5', value='x')").unwrap(),
            Action::fill("5", "x")
        );
        assert_eq!(
            parse_action("scroll(delta_x=0, delta_y=-300)").unwrap(),
            Action::scroll(0.0, -300.0)
        );
    }
}
