// WebSocket wrapper with capped-backoff reconnect. Messages are text
// frames, one JSON object each (see PROTOCOL.md).

export interface NetHandlers {
  onMessage(text: string): void;
  onStatus(status: "connecting" | "open" | "closed"): void;
}

export interface Net {
  send(text: string): boolean;
  close(): void;
}

export function connect(url: string, handlers: NetHandlers): Net {
  let ws: WebSocket | null = null;
  let stopped = false;
  let retryMs = 1000;

  const open = () => {
    handlers.onStatus("connecting");
    ws = new WebSocket(url);
    ws.onopen = () => {
      retryMs = 1000;
      handlers.onStatus("open");
    };
    ws.onmessage = (ev) => {
      if (typeof ev.data === "string") handlers.onMessage(ev.data);
    };
    ws.onclose = () => {
      handlers.onStatus("closed");
      if (!stopped) {
        setTimeout(open, retryMs);
        retryMs = Math.min(retryMs * 2, 8000);
      }
    };
    ws.onerror = () => {
      // onclose follows and owns the retry
    };
  };

  open();

  return {
    send(text: string): boolean {
      if (ws && ws.readyState === WebSocket.OPEN) {
        ws.send(text);
        return true;
      }
      return false;
    },
    close(): void {
      stopped = true;
      ws?.close();
    },
  };
}
