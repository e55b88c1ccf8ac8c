//! Line-delimited JSON protocol exposing [`Env`] to an external trainer.
//!
//! One request per line, one response per line. A session owns at most one
//! episode; `reset` replaces it. Requests:
//!
//! ```text
//! {"cmd":"reset","logical":<graph>,"hardware":{"m":M,"n":N,"l":L},"sigma":x,"guide":[...]|null,"seed":s}
//! {"cmd":"step","action":v}
//! {"cmd":"mask"}
//! {"cmd":"close"}
//! ```
//!
//! `<graph>` is an inline `{"nodes":n,"edges":[[u,v],...]}`, a path to a
//! graph file, or `{"ba":{"n":n,"d":d}}` generated from `seed`.
//!
//! `reset`, `step` and `mask` answer with a state message; `close` answers
//! `{"ok":true}` and ends the session. Failures answer
//! `{"ok":false,"error":code}` and leave the episode unchanged.
//! The hardware adjacency is implied by `(m, n, l)`; the logical edges are
//! echoed once, in the reply to `reset`.

use std::io::{BufRead, Write};
use std::path::Path;

use chainembed_core::env::Env;
use chainembed_core::{Error as CoreError, HardwareGraph, LogicalGraph, LogicalNode, Qubit};
use serde::{Deserialize, Serialize};

use crate::io;

/// Upper limit on the qubit count a `reset` may request.
pub const MAX_QUBITS: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "cmd", rename_all = "lowercase", deny_unknown_fields)]
pub enum Request {
    Reset {
        logical: GraphSource,
        hardware: ChimeraShape,
        sigma: f64,
        guide: Option<Vec<LogicalNode>>,
        seed: u64,
    },
    Step {
        action: LogicalNode,
    },
    Mask,
    Close,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphSource {
    Inline { nodes: usize, edges: Vec<(LogicalNode, LogicalNode)> },
    Generated { ba: BaParams },
    File(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaParams {
    pub n: usize,
    pub d: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChimeraShape {
    pub m: usize,
    pub n: usize,
    pub l: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Response {
    State(StateMessage),
    Error(ErrorMessage),
    Closed(Ack),
}

/// Sparse episode snapshot.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateMessage {
    pub ok: bool,
    pub t: usize,
    /// Reward of the step that produced this state; `0.0` after `reset`
    /// and for `mask`.
    pub reward: f64,
    pub done: bool,
    pub qubits: usize,
    /// `[qubit, owner]` for every occupied qubit, by qubit id.
    pub hw_features: Vec<(Qubit, LogicalNode)>,
    /// `[v, chain]` for every embedded node, by node id.
    pub chains: Vec<(LogicalNode, Vec<Qubit>)>,
    pub mask: Vec<bool>,
    /// Logical edge list, present only in the reply to `reset`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<(LogicalNode, LogicalNode)>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErrorMessage {
    pub ok: bool,
    pub error: ErrorCode,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ack {
    pub ok: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCode {
    /// The line is not a well-formed request.
    BadRequest,
    /// The logical graph could not be read or built.
    BadGraph,
    /// Out-of-range `sigma`, hardware shape or guide order.
    InvalidParameter,
    /// `step` or `mask` before any `reset`.
    NoEpisode,
    /// The action is masked out or out of range.
    IllegalAction,
    /// The episode already embedded every node.
    EpisodeDone,
    /// The hardware ran out of room for the chosen node.
    HardwareExhausted,
}

impl Response {
    pub fn error(code: ErrorCode) -> Self {
        Response::Error(ErrorMessage { ok: false, error: code })
    }
}

/// Serializes one message without the trailing newline.
pub fn encode<T: Serialize>(message: &T) -> String {
    serde_json::to_string(message).expect("protocol messages always serialize")
}

pub fn decode_request(line: &str) -> Result<Request, serde_json::Error> {
    serde_json::from_str(line)
}

pub fn decode_response(line: &str) -> Result<Response, serde_json::Error> {
    serde_json::from_str(line)
}

fn state_message(env: &Env, reward: f64, with_edges: bool) -> StateMessage {
    let s = env.state();
    StateMessage {
        ok: true,
        t: s.t,
        reward,
        done: s.is_done(),
        qubits: s.qubits(),
        hw_features: s.chain_matrix(),
        chains: s
            .embedded()
            .into_iter()
            .map(|v| (v, s.embedding.chain(v).to_vec()))
            .collect(),
        mask: s.action_mask(),
        edges: with_edges.then(|| env.logical().edges().collect()),
    }
}

fn build_graph(source: &GraphSource, seed: u64) -> Result<LogicalGraph, ErrorCode> {
    match source {
        GraphSource::Inline { nodes, edges } => {
            LogicalGraph::from_edges(*nodes, edges).map_err(|_| ErrorCode::BadGraph)
        }
        GraphSource::Generated { ba } => {
            LogicalGraph::barabasi_albert(ba.n, ba.d, seed).map_err(|_| ErrorCode::BadGraph)
        }
        GraphSource::File(path) => io::load_graph(Path::new(path)).map_err(|_| ErrorCode::BadGraph),
    }
}

fn build_hardware(shape: ChimeraShape) -> Result<HardwareGraph, ErrorCode> {
    let qubits = shape
        .m
        .checked_mul(shape.n)
        .and_then(|c| c.checked_mul(2 * shape.l))
        .filter(|&q| q <= MAX_QUBITS)
        .ok_or(ErrorCode::InvalidParameter)?;
    if qubits == 0 {
        return Err(ErrorCode::InvalidParameter);
    }
    HardwareGraph::chimera(shape.m, shape.n, shape.l).map_err(|_| ErrorCode::InvalidParameter)
}

/// One protocol session.
#[derive(Debug, Default)]
pub struct Session {
    env: Option<Env>,
}

impl Session {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn env(&self) -> Option<&Env> {
        self.env.as_ref()
    }

    pub fn handle(&mut self, request: Request) -> Response {
        match self.dispatch(request) {
            Ok(r) => r,
            Err(code) => Response::error(code),
        }
    }

    fn dispatch(&mut self, request: Request) -> Result<Response, ErrorCode> {
        match request {
            Request::Reset { logical, hardware, sigma, guide, seed } => {
                let logical = build_graph(&logical, seed)?;
                let hardware = build_hardware(hardware)?;
                let env = Env::reset(logical, hardware, guide, sigma)
                    .map_err(|_| ErrorCode::InvalidParameter)?;
                let reply = state_message(&env, 0.0, true);
                self.env = Some(env);
                Ok(Response::State(reply))
            }
            Request::Step { action } => {
                let env = self.env.as_mut().ok_or(ErrorCode::NoEpisode)?;
                let out = env.step(action).map_err(|e| match e {
                    CoreError::EpisodeDone => ErrorCode::EpisodeDone,
                    CoreError::IllegalAction(_) => ErrorCode::IllegalAction,
                    _ => ErrorCode::HardwareExhausted,
                })?;
                Ok(Response::State(state_message(env, out.reward, false)))
            }
            Request::Mask => {
                let env = self.env.as_ref().ok_or(ErrorCode::NoEpisode)?;
                Ok(Response::State(state_message(env, 0.0, false)))
            }
            Request::Close => Ok(Response::Closed(Ack { ok: true })),
        }
    }

    /// Answers one request line. The flag is `false` once the session
    /// should end.
    pub fn handle_line(&mut self, line: &str) -> (String, bool) {
        match decode_request(line) {
            Ok(Request::Close) => (encode(&self.handle(Request::Close)), false),
            Ok(req) => (encode(&self.handle(req)), true),
            Err(_) => (encode(&Response::error(ErrorCode::BadRequest)), true),
        }
    }
}

/// Serves requests from `input` until `close` or end of input. Blank lines
/// are ignored.
pub fn serve(input: impl BufRead, mut output: impl Write) -> std::io::Result<()> {
    let mut session = Session::new();
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let (reply, open) = session.handle_line(&line);
        writeln!(output, "{reply}")?;
        output.flush()?;
        if !open {
            break;
        }
    }
    Ok(())
}
