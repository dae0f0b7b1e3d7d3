//! HTTP front door: serves every (site, version) pair under `/v{k}/{site}/`
//! through the same renderer the kernel uses, with per-session UI state keyed
//! by a cookie.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use axum::extract::{Path as AxPath, Query, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Redirect, Response};
use axum::routing::get;
use axum::Router;
use timewarp::dom::to_html;
use timewarp::env::{resolve_url, PageRef, PageState, SiteUrl, UiState};
use timewarp::render::features;
use timewarp::sites::Backends;
use timewarp::types::{Site, Version};

const COOKIE: &str = "twsession";

#[derive(Default)]
struct SessionState {
    ui: UiState,
}

pub struct ServerState {
    backends: Backends,
    sessions: Mutex<HashMap<String, SessionState>>,
}

impl ServerState {
    pub fn new(backends: Backends) -> Arc<ServerState> {
        Arc::new(ServerState {
            backends,
            sessions: Mutex::new(HashMap::new()),
        })
    }
}

pub fn router(state: Arc<ServerState>) -> Router {
    Router::new()
        .route("/", get(index))
        .route("/{version}/{site}/", get(page))
        .route("/{version}/{site}", get(page))
        .route("/{version}/{site}/{*path}", get(page))
        .with_state(state)
}

fn session_id(headers: &HeaderMap) -> Option<String> {
    let cookies = headers.get(header::COOKIE)?.to_str().ok()?;
    cookies.split(';').find_map(|pair| {
        let (name, value) = pair.trim().split_once('=')?;
        (name == COOKIE).then(|| value.to_string())
    })
}

async fn index() -> Response {
    let mut body = String::from("<html><head><title>TimeWarp</title></head><body><h1>TimeWarp sites</h1><ul>");
    for site in Site::ALL {
        for version in Version::ALL {
            body.push_str(&format!(
                "<li><a href=\"/{v}/{s}/\">{s} {v}</a></li>",
                v = version.name(),
                s = site.name()
            ));
        }
    }
    body.push_str("</ul></body></html>");
    ([(header::CONTENT_TYPE, "text/html; charset=utf-8")], body).into_response()
}

async fn page(
    State(state): State<Arc<ServerState>>,
    AxPath(params): AxPath<Vec<(String, String)>>,
    Query(query): Query<Vec<(String, String)>>,
    headers: HeaderMap,
) -> Response {
    let mut version_name = String::new();
    let mut site_name = String::new();
    let mut sub_path = String::new();
    for (key, value) in params {
        match key.as_str() {
            "version" => version_name = value,
            "site" => site_name = value,
            "path" => sub_path = value,
            _ => {}
        }
    }
    let Ok(version) = Version::parse(&version_name) else {
        return (StatusCode::NOT_FOUND, "unknown version").into_response();
    };
    let Ok(site) = Site::parse(&site_name) else {
        return (StatusCode::NOT_FOUND, "unknown site").into_response();
    };

    let (session, set_cookie) = match session_id(&headers) {
        Some(id) => (id, false),
        None => (uuid::Uuid::new_v4().to_string(), true),
    };

    let url = SiteUrl {
        site,
        segments: sub_path
            .split('/')
            .filter(|s| !s.is_empty())
            .map(timewarp::urlenc::decode_component)
            .collect(),
        query: query.clone(),
    };

    let response = render_or_redirect(&state, version, url, &session).await;
    if set_cookie {
        let mut response = response;
        if let Ok(value) = format!("{COOKIE}={session}; Path=/").parse() {
            response.headers_mut().append(header::SET_COOKIE, value);
        }
        response
    } else {
        response
    }
}

async fn render_or_redirect(
    state: &ServerState,
    version: Version,
    url: SiteUrl,
    session: &str,
) -> Response {
    let backends = &state.backends;
    let mut sessions = state.sessions.lock().unwrap();
    let entry = sessions.entry(session.to_string()).or_default();

    // in-place UI transitions, mirrored from the kernel: icon-gated search
    // opens for the rest of the session; popup dismissal is remembered
    if url.segments.first().map(|s| s.as_str()) == Some("open_search") {
        entry.ui.icon_open = true;
        let target = url
            .query_get("return")
            .filter(|r| !r.is_empty())
            .map(|r| r.to_string())
            .unwrap_or_else(|| format!("/{}/{}/", version.name(), url.site.name()));
        return Redirect::to(&target).into_response();
    }
    if url.query_get("dismiss_ad") == Some("1") {
        if let Some(id) = url.segments.get(1) {
            entry.ui.popup_seen.insert(id.clone());
        }
        let mut canonical = url.clone();
        canonical.query.retain(|(k, _)| k != "dismiss_ad");
        return Redirect::to(&canonical.http_path(version)).into_response();
    }

    // the search route mirrors fill+Enter: a wiki exact hit redirects to the
    // article page, exact-only misses land on not-found
    if url.site == Site::Wiki && url.segments.first().map(|s| s.as_str()) == Some("search") {
        let query = url.query_get("q").unwrap_or("");
        let target = timewarp::env::search_target(backends, version, Site::Wiki, query.trim());
        match &target {
            PageRef::WikiResults { .. } => {}
            other => {
                return Redirect::to(&other.to_url().http_path(version)).into_response();
            }
        }
    }

    let page = match resolve_url(backends, &url) {
        Ok(page) => page,
        Err(step_error) => {
            // order attempts with missing options bounce back to the product
            if let Some(id) = url.segments.get(1) {
                let chosen: std::collections::BTreeMap<String, String> =
                    url.query.iter().cloned().collect();
                let back = PageRef::ShopProduct { id: id.clone(), chosen }.to_url();
                let _ = step_error;
                return Redirect::to(&back.http_path(version)).into_response();
            }
            return (StatusCode::BAD_REQUEST, step_error.to_string()).into_response();
        }
    };

    let popup = match &page {
        PageRef::ShopProduct { id, .. }
            if features(Site::Shop, version).popup_ads && !entry.ui.popup_seen.contains(id) =>
        {
            entry.ui.popup_seen.insert(id.clone());
            true
        }
        _ => false,
    };
    let page_state = PageState::build(backends, version, &entry.ui, page, popup);
    let body = to_html(&page_state.dom);
    ([(header::CONTENT_TYPE, "text/html; charset=utf-8")], body).into_response()
}

/// Serve until interrupted.
pub async fn serve(backends: Backends, host: &str, port: u16) -> anyhow::Result<()> {
    let state = ServerState::new(backends);
    let app = router(state);
    let addr = format!("{host}:{port}");
    let listener = tokio::net::TcpListener::bind(&addr)
        .await
        .map_err(|e| anyhow::anyhow!("cannot bind {addr}: {e}"))?;
    println!("serving on http://{addr}/ (all sites, versions v1..v6)");
    axum::serve(listener, app).await?;
    Ok(())
}
