/** Line-delimited transports. The controller only sees this interface. */

export interface LineTransport {
  sendLine(line: string): void;
  close(): void;
  onLine(handler: (line: string) => void): void;
  onClose(handler: () => void): void;
}

/** Splits an incoming chunk stream back into complete lines. */
export class LineSplitter {
  private buffer = "";

  constructor(private readonly emit: (line: string) => void) {}

  push(chunk: string): void {
    this.buffer += chunk;
    for (;;) {
      const at = this.buffer.indexOf("\n");
      if (at < 0) return;
      const line = this.buffer.slice(0, at).replace(/\r$/, "");
      this.buffer = this.buffer.slice(at + 1);
      if (line.length > 0) this.emit(line);
    }
  }
}

/** Browser transport: each WebSocket message carries one or more lines. */
export class WebSocketTransport implements LineTransport {
  private lineHandler: (line: string) => void = () => {};
  private closeHandler: () => void = () => {};
  private readonly splitter = new LineSplitter((line) => this.lineHandler(line));

  constructor(private readonly socket: WebSocket) {
    socket.addEventListener("message", (message) => {
      const text =
        typeof message.data === "string" ? message.data : String(message.data);
      this.splitter.push(text.endsWith("\n") ? text : text + "\n");
    });
    socket.addEventListener("close", () => this.closeHandler());
    socket.addEventListener("error", () => this.closeHandler());
  }

  sendLine(line: string): void {
    this.socket.send(line + "\n");
  }

  close(): void {
    this.socket.close();
  }

  onLine(handler: (line: string) => void): void {
    this.lineHandler = handler;
  }

  onClose(handler: () => void): void {
    this.closeHandler = handler;
  }
}

export function connectWebSocket(url: string): Promise<WebSocketTransport> {
  return new Promise((resolve, reject) => {
    const socket = new WebSocket(url);
    socket.addEventListener("open", () => resolve(new WebSocketTransport(socket)));
    socket.addEventListener("error", () => reject(new Error(`cannot reach ${url}`)));
  });
}
