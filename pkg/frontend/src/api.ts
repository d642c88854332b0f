/**
 * Typed client for the human-evaluation service.
 *
 * The service owns all state and scoring; this module only moves payloads.
 */

export interface SessionCreated {
    session_id: string;
    sequence: string[];
    hidden: number[];
}

export interface AnswerReply {
    correct: boolean;
    revealed: string[];
    streak: number;
    next_sequence: string[];
    next_hidden: number[];
    task_switched: boolean;
}

export interface ScorePayload {
    curve: [number, number][];
    wade: number;
}

export class ApiError extends Error {
    code: string;
    status: number;

    constructor(status: number, code: string, message: string) {
        super(message);
        this.code = code;
        this.status = status;
    }
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
        response = await fetch(path, init);
    } catch (err) {
        throw new ApiError(0, 'unreachable', `service unreachable: ${err}`);
    }
    const body = await response.json().catch(() => ({}));
    if (!response.ok) {
        const error = (body as { error?: { code?: string; message?: string } }).error;
        throw new ApiError(response.status, error?.code ?? 'unknown',
            error?.message ?? `request failed with status ${response.status}`);
    }
    return body as T;
}

export function createSession(): Promise<SessionCreated> {
    return request<SessionCreated>('/session', { method: 'POST' });
}

export function submitAnswers(sessionId: string, answers: string[]): Promise<AnswerReply> {
    return request<AnswerReply>(`/session/${sessionId}/answer`, {
        method: 'POST',
        headers: { 'Content-Type': 'application/json' },
        body: JSON.stringify({ answers }),
    });
}

export function fetchScore(sessionId: string): Promise<ScorePayload> {
    return request<ScorePayload>(`/session/${sessionId}/score`);
}

export function health(): Promise<{ status: string }> {
    return request<{ status: string }>('/health');
}
