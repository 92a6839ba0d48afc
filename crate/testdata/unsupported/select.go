package main

import "time"

func main() {
	ch := make(chan int)
	select {
	case v := <-ch:
		_ = v
	case <-time.After(time.Second):
	}
}
